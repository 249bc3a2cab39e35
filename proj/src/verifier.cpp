#include "pmin/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "format.hpp"
#include "pmin/closed_forms.hpp"

namespace pmin {

namespace {

// Lemma 1/2 sample points closer than this to the origin or the vertical
// axis are redrawn; finite differences lose accuracy there.
constexpr double kOffAxisMargin = 1e-3;

Point uniform_ball_point(int dim, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  Point d(dim);
  for (int i = 0; i < dim; ++i) d[i] = gauss(rng);
  return d.normalized() * radius * std::pow(unif(rng), 1.0 / dim);
}

CheckStep identity_step(std::string name, double lhs, double rhs,
                        double tolerance, bool relative) {
  CheckStep s;
  s.name = std::move(name);
  s.kind = CheckKind::identity;
  s.lhs = lhs;
  s.rhs = rhs;
  const double diff = std::abs(lhs - rhs);
  s.margin = relative ? diff / std::max(std::abs(rhs),
                                        std::numeric_limits<double>::min())
                      : diff;
  s.tolerance = tolerance;
  s.holds = s.margin <= tolerance;
  return s;
}

// lhs <= rhs within sigmas * sigma + extra + relative fp slack.
CheckStep inequality_step(std::string name, double lhs, double rhs,
                          double sigma, double extra,
                          const InequalityPolicy& policy) {
  CheckStep s;
  s.name = std::move(name);
  s.kind = CheckKind::inequality;
  s.lhs = lhs;
  s.rhs = rhs;
  s.margin = rhs - lhs;
  s.sigma = sigma;
  s.tolerance = policy.sigmas * sigma + extra +
                policy.relative_slack * std::max(std::abs(lhs), std::abs(rhs));
  s.holds = s.margin >= -s.tolerance;
  return s;
}

bool required_steps_hold(const std::vector<CheckStep>& steps) {
  return std::all_of(steps.begin(), steps.end(), [](const CheckStep& s) {
    return !s.required || s.holds;
  });
}

void require_base_dimension(const SphereMap& base, const EnergyParams& params) {
  if (base.dim_in() != params.n) {
    throw Error(ErrorCode::invalid_argument,
                "base map " + base.label() + " lives on B^" +
                    std::to_string(base.dim_in()) + " but n = " +
                    std::to_string(params.n));
  }
  if (!(params.p < params.n + 1.0 + params.alpha)) {
    throw Error(ErrorCode::divergent_energy,
                "lifted energy diverges for p >= n + 1 + alpha");
  }
}

QuadratureSpec independent_stream(const QuadratureSpec& spec) {
  QuadratureSpec s = spec;
  s.seed = spec.seed ^ 0x6a09e667f3bcc909ULL;
  return s;
}

QuadratureSpec product_spec(const QuadratureSpec& spec,
                            const InequalityPolicy& policy) {
  QuadratureSpec s = spec;
  s.method = QuadratureMethod::radial_product;
  s.radial_nodes = policy.rerun_radial_nodes;
  s.samples = std::max<std::int64_t>(100, policy.rerun_directions);
  return s;
}

struct LiftBoundSides {
  Estimate lhs;
  Estimate base_energy;
  Estimate rhs;
  double core = 0.0;
  LiftBoundConstants constants;
};

LiftBoundSides lift_bound_sides(const SphereMap& base, const LiftedMap& lifted,
                                const EnergyParams& params,
                                const QuadratureSpec& spec) {
  const int n = params.n;
  const EnergyParams lifted_params{n + 1, params.p, params.alpha};
  const EnergyParams base_params{n, params.p, params.alpha + 1.0};
  LiftBoundSides s;
  s.constants = lemma3_rhs_constants(n, params.p);
  s.lhs = energy(lifted.as_sphere_map(), lifted_params, spec);
  s.base_energy = energy(base, base_params, independent_stream(spec));
  s.core = s.constants.c1 * ball_power_integral(n + 1, params.alpha - params.p);
  s.rhs.value = s.core + s.constants.c2 * s.base_energy.value;
  s.rhs.std_error = s.constants.c2 * s.base_energy.std_error;
  s.rhs.n_eval = s.base_energy.n_eval;
  if (s.base_energy.bias_bound) {
    s.rhs.bias_bound = s.constants.c2 * *s.base_energy.bias_bound;
  }
  return s;
}

CheckStep lift_bound_step(std::string name, const LiftBoundSides& s,
                          const InequalityPolicy& policy) {
  return inequality_step(std::move(name), s.lhs.value, s.rhs.value,
                         std::hypot(s.lhs.std_error, s.rhs.std_error),
                         s.rhs.bias_bound.value_or(0.0), policy);
}

// Worst relative residual of the pointwise convexity split over a fixed
// sample of B^{n+1}; negative means the split fails somewhere.
double min_split_residual(const LiftedMap& lifted, double p,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x3c6ef372fe94f82bULL);
  const int n = lifted.base().dim_in();
  double worst = std::numeric_limits<double>::infinity();
  int accepted = 0;
  while (accepted < 2000) {
    const Point x = uniform_ball_point(n + 1, 1.0, rng);
    if (x.norm() < kOffAxisMargin || x.head(n).norm() < kOffAxisMargin) {
      continue;
    }
    const double r = x.norm();
    const double a = 1.0 / (r * r);
    const double b = gradient_norm_sq(lifted.base(), lifted.preimage(x)).value;
    const double scale = std::pow(a + b, p / 2.0);
    worst = std::min(worst, convexity_split_residual(n, p, a, b) / scale);
    ++accepted;
  }
  return worst;
}

}  // namespace

const char* to_string(CheckKind kind) noexcept {
  return kind == CheckKind::identity ? "identity" : "inequality";
}

CheckKind check_kind_from_string(const std::string& name) {
  if (name == "identity") return CheckKind::identity;
  if (name == "inequality") return CheckKind::inequality;
  throw Error(ErrorCode::invalid_argument, "unknown check kind '" + name + "'");
}

const CheckStep* VerificationReport::step(const std::string& name) const {
  for (const auto& s : steps) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

VerificationReport verify_lemma1(const SphereMap& base, std::int64_t n_points,
                                 std::uint64_t seed, double fd_tolerance,
                                 double analytic_tolerance) {
  if (n_points < 1) {
    throw Error(ErrorCode::invalid_argument, "n_points must be positive");
  }
  const LiftedMap lifted = lift(base);
  const SphereMap fd_map = lifted.as_sphere_map().without_jacobian();
  const bool analytic = lifted.as_sphere_map().has_jacobian();
  const int dim = lifted.dim_in();

  VerificationReport rep;
  rep.check_id = "lemma1";
  rep.kind = CheckKind::identity;
  rep.n = base.dim_in();
  rep.map_label = base.label();
  rep.n_points = n_points;
  rep.seed = seed;

  std::mt19937_64 rng(seed);
  double worst_fd = 0.0;
  double worst_analytic = 0.0;
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  // Relative gap between 1/|x|^2 + |grad u(y)|^2 and the exact value.
  double worst_gap = 0.0;
  double worst_excess = 0.0;
  for (std::int64_t k = 0; k < n_points;) {
    const Point x = uniform_ball_point(dim, 1.0, rng);
    if (x.norm() < kOffAxisMargin || x.head(dim - 1).norm() < kOffAxisMargin) {
      ++rep.resampled;
      continue;
    }
    double rhs = 0.0;
    double bound = 0.0;
    double fd = 0.0;
    try {
      bound = lifted_gradient_norm_sq(lifted, x).value;
      rhs = lifted_gradient_norm_sq_exact(lifted, x).value;
      fd = gradient_norm_sq(fd_map, x).value;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::singular_point &&
          e.code() != ErrorCode::axis_singularity) {
        throw;
      }
      ++rep.resampled;
      continue;
    }
    const double res = std::abs(fd - rhs) / rhs;
    if (res > worst_fd) {
      worst_fd = res;
      worst_lhs = fd;
      worst_rhs = rhs;
    }
    worst_gap = std::max(worst_gap, (bound - rhs) / bound);
    worst_excess = std::max(worst_excess, (fd - bound) / bound);
    if (analytic) {
      const double exact = lifted.as_sphere_map().jacobian(x).squaredNorm();
      worst_analytic = std::max(worst_analytic, std::abs(exact - rhs) / rhs);
    }
    ++k;
  }

  rep.steps.push_back(CheckStep{"finite_difference", CheckKind::identity,
                                worst_lhs, worst_rhs, worst_fd, 0.0,
                                fd_tolerance, worst_fd <= fd_tolerance, true});
  if (analytic) {
    rep.steps.push_back(CheckStep{"analytic_chain", CheckKind::identity, 0.0,
                                  0.0, worst_analytic, 0.0, analytic_tolerance,
                                  worst_analytic <= analytic_tolerance, true});
  } else {
    rep.note = "base map has no analytic jacobian; finite differences only";
  }
  // |grad ubar|^2 <= 1/|x|^2 + |grad u(y)|^2 everywhere.
  rep.steps.push_back(CheckStep{"upper_bound", CheckKind::inequality, 0.0, 0.0,
                                -worst_excess, 0.0, fd_tolerance,
                                worst_excess <= fd_tolerance, true});
  // Equality in the bound needs du(y) y = 0; required only when the sample
  // shows a 0-homogeneous base.
  const bool homogeneous = worst_gap <= analytic_tolerance;
  rep.steps.push_back(CheckStep{"radial_free_identity", CheckKind::identity,
                                0.0, 0.0, worst_gap, 0.0, fd_tolerance,
                                worst_gap <= fd_tolerance, homogeneous});
  if (!homogeneous) {
    if (!rep.note.empty()) rep.note += "; ";
    rep.note += "base depends on |y|: 1/|x|^2 + |grad u|^2 exceeds |grad ubar|^2 "
                "by up to " + detail::format_number(worst_gap) + " (relative)";
  }
  rep.lhs.value = worst_lhs;
  rep.rhs.value = worst_rhs;
  rep.lhs.n_eval = rep.rhs.n_eval = n_points;
  rep.margin = worst_fd;
  rep.tolerance = fd_tolerance;
  rep.passed = required_steps_hold(rep.steps);
  return rep;
}

VerificationReport verify_lemma2(int n, std::int64_t n_points,
                                 std::uint64_t seed, double tolerance) {
  if (n < 2) {
    throw Error(ErrorCode::invalid_dimension, "lemma2 needs n >= 2");
  }
  if (n_points < 1) {
    throw Error(ErrorCode::invalid_argument, "n_points must be positive");
  }
  VerificationReport rep;
  rep.check_id = "lemma2";
  rep.kind = CheckKind::identity;
  rep.n = n;
  rep.n_points = n_points;
  rep.seed = seed;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif;
  double worst_det = 0.0;
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  double worst_recip = 0.0;
  double worst_roundtrip = 0.0;
  double worst_norm = 0.0;
  double worst_unit = 0.0;
  for (std::int64_t k = 0; k < n_points;) {
    const double c = unif(rng);
    if (!(c > 0.0 && c < 1.0)) {
      ++rep.resampled;
      continue;
    }
    const Point base = uniform_ball_point(n, std::sqrt(1.0 - c * c), rng);
    const double rho = base.norm();
    if (rho < kOffAxisMargin) {
      ++rep.resampled;
      continue;
    }
    Point x(n + 1);
    x.head(n) = base;
    x[n] = c;
    const SliceChart chart = SliceChart::make(n, c);
    const Point y = theta(chart, x);
    const double s = y.norm();
    const double closed = theta_inverse_jacobian(chart, y);

    // Step scaled to the distance to the chart edge |y| = c.
    const double h = 1e-4 * std::min(s, rho * rho / (s + c));
    Matrix jac(n, n);
    Point yp = y;
    Point ym = y;
    for (int i = 0; i < n; ++i) {
      yp[i] = y[i] + h;
      ym[i] = y[i] - h;
      jac.col(i) = (theta_inverse(chart, yp) - theta_inverse(chart, ym))
                       .head(n) / (2.0 * h);
      yp[i] = y[i];
      ym[i] = y[i];
    }
    const double det = jac.determinant();
    const double rel = std::abs(det - closed) / std::abs(closed);
    if (rel > worst_det) {
      worst_det = rel;
      worst_lhs = det;
      worst_rhs = closed;
    }
    worst_recip = std::max(
        worst_recip, std::abs(theta_jacobian(chart, x) * closed - 1.0));
    worst_roundtrip =
        std::max(worst_roundtrip, (theta_inverse(chart, y) - x).norm());
    worst_norm = std::max(worst_norm, std::abs(s - x.norm()));
    worst_unit = std::max(worst_unit, std::abs(closed - 1.0));
    ++k;
  }

  rep.steps.push_back(CheckStep{"fd_determinant", CheckKind::identity,
                                worst_lhs, worst_rhs, worst_det, 0.0, tolerance,
                                worst_det <= tolerance, true});
  rep.steps.push_back(CheckStep{"reciprocity", CheckKind::identity, 0.0, 0.0,
                                worst_recip, 0.0, 1e-10, worst_recip <= 1e-10,
                                true});
  rep.steps.push_back(CheckStep{"round_trip", CheckKind::identity, 0.0, 0.0,
                                worst_roundtrip, 0.0, 1e-12,
                                worst_roundtrip <= 1e-12, true});
  rep.steps.push_back(CheckStep{"norm_preservation", CheckKind::identity, 0.0,
                                0.0, worst_norm, 0.0, 1e-14,
                                worst_norm <= 1e-14, true});
  if (n == 2) {
    rep.steps.push_back(CheckStep{"unit_jacobian_n2", CheckKind::identity, 1.0,
                                  1.0, worst_unit, 0.0, 0.0,
                                  worst_unit == 0.0, true});
  }
  rep.lhs.value = worst_lhs;
  rep.rhs.value = worst_rhs;
  rep.lhs.n_eval = rep.rhs.n_eval = n_points;
  rep.margin = worst_det;
  rep.tolerance = tolerance;
  rep.passed = required_steps_hold(rep.steps);
  return rep;
}

VerificationReport verify_lemma3(const SphereMap& base,
                                 const EnergyParams& params,
                                 const QuadratureSpec& spec,
                                 const InequalityPolicy& policy) {
  require_base_dimension(base, params);
  const int n = params.n;
  const double p = params.p;
  const LiftedMap lifted = lift(base);
  const LiftBoundSides sides = lift_bound_sides(base, lifted, params, spec);

  VerificationReport rep;
  rep.check_id = "lemma3";
  rep.kind = CheckKind::inequality;
  rep.params = params;
  rep.n = n;
  rep.map_label = base.label();
  rep.n_points = spec.samples;
  rep.seed = spec.seed;
  rep.workers = spec.workers;
  rep.lhs = sides.lhs;
  rep.rhs = sides.rhs;

  const CheckStep main = lift_bound_step("lift_bound", sides, policy);
  rep.steps.push_back(main);
  rep.margin = main.margin;
  rep.tolerance = main.tolerance;

  if (base.label() == "radial") {
    const double k = n + 1.0 + params.alpha - p;
    const double area_n = sphere_measure(n);
    const double lhs_cf = std::pow(n, p / 2.0) * area_n / k;
    const double base_cf =
        radial_energy_closed_form(EnergyParams{n, p, params.alpha + 1.0});
    const double rhs_cf = sides.core + sides.constants.c2 * base_cf;
    auto matches = [&](std::string name, const Estimate& est, double exact) {
      CheckStep s = identity_step(std::move(name), est.value, exact, 0.0, false);
      s.sigma = est.std_error;
      s.tolerance = policy.sigmas * est.std_error + est.bias_bound.value_or(0.0) +
                    policy.relative_slack * std::abs(exact);
      s.holds = s.margin <= s.tolerance;
      return s;
    };
    rep.steps.push_back(matches("lhs_closed_form", sides.lhs, lhs_cf));
    rep.steps.push_back(matches("rhs_closed_form", sides.rhs, rhs_cf));
    CheckStep cf = inequality_step("closed_form_bound", lhs_cf, rhs_cf, 0.0,
                                   0.0, policy);
    cf.required = p >= 2.0;
    rep.steps.push_back(cf);
  }

  CheckStep split;
  split.name = "pointwise_split";
  split.kind = CheckKind::inequality;
  split.margin = min_split_residual(lifted, p, spec.seed);
  split.tolerance = 1e-12;
  split.holds = split.margin >= -split.tolerance;
  // The convexity split only holds for p >= 2; below that it is reported.
  split.required = false;
  rep.steps.push_back(split);
  if (p < 2.0) {
    rep.note =
        "p < 2: t -> t^{p/2} is concave, the pointwise split is not assumed";
  }

  if (policy.product_rerun && spec.method == QuadratureMethod::monte_carlo &&
      std::abs(main.margin) < main.tolerance) {
    const LiftBoundSides again =
        lift_bound_sides(base, lifted, params, product_spec(spec, policy));
    rep.steps.push_back(lift_bound_step("product_rerun", again, policy));
  }

  rep.passed = required_steps_hold(rep.steps);
  return rep;
}

VerificationReport verify_lemma4(int n_max, double tolerance) {
  if (n_max < 2) {
    throw Error(ErrorCode::invalid_dimension, "lemma4 needs n_max >= 2");
  }
  const double target = std::sqrt(std::numbers::pi) / 2.0;
  VerificationReport rep;
  rep.check_id = "lemma4";
  rep.kind = CheckKind::identity;
  rep.n = n_max;
  rep.n_points = n_max - 1;
  double worst = 0.0;
  double worst_value = target;
  for (int n = 2; n <= n_max; ++n) {
    const double v = lemma4_identity(n);
    if (std::abs(v - target) > worst) {
      worst = std::abs(v - target);
      worst_value = v;
    }
  }
  rep.lhs.value = worst_value;
  rep.rhs.value = target;
  rep.margin = worst;
  rep.tolerance = tolerance;
  rep.steps.push_back(CheckStep{"max_residual", CheckKind::identity,
                                worst_value, target, worst, 0.0, tolerance,
                                worst <= tolerance, true});
  rep.passed = worst <= tolerance;
  return rep;
}

VerificationReport verify_theorem_chain(const SphereMap& base,
                                        const EnergyParams& params,
                                        const QuadratureSpec& spec,
                                        const InequalityPolicy& policy) {
  require_base_dimension(base, params);
  const int n = params.n;
  const double p = params.p;
  const double nd = n;
  const LiftedMap lifted = lift(base);
  const LiftBoundSides sides = lift_bound_sides(base, lifted, params, spec);

  // Lifted radial energy n^{p/2} |S^n| / (n+1+alpha-p).
  const double lifted_radial =
      radial_energy_closed_form(EnergyParams{n + 1, p, params.alpha});
  const double radial_base =
      radial_energy_closed_form(EnergyParams{n, p, params.alpha + 1.0});
  const double w = wallis(n - 1).value;
  const double rewritten_coeff =
      2.0 * w * (1.0 - 1.0 / nd) * std::pow(nd / (nd - 1.0), p / 2.0);
  const double rewritten_core = lifted_radial / nd;
  const double lower_bound = lifted_radial * (1.0 - 1.0 / nd) / rewritten_coeff;

  VerificationReport rep;
  rep.check_id = "theorem";
  rep.kind = CheckKind::inequality;
  rep.params = params;
  rep.n = n;
  rep.map_label = base.label();
  rep.n_points = spec.samples;
  rep.seed = spec.seed;
  rep.workers = spec.workers;

  CheckStep premise = inequality_step("premise", lifted_radial, sides.lhs.value,
                                      sides.lhs.std_error,
                                      sides.lhs.bias_bound.value_or(0.0), policy);
  premise.required = false;
  rep.steps.push_back(premise);
  rep.steps.push_back(lift_bound_step("lemma3", sides, policy));
  rep.steps.push_back(identity_step("rhs_core_rewrite", sides.core,
                                    rewritten_core, 1e-12, true));
  rep.steps.push_back(identity_step("rhs_coefficient_rewrite",
                                    sides.constants.c2, rewritten_coeff, 1e-12,
                                    true));
  rep.steps.push_back(
      identity_step("lemma4_lower_bound", lower_bound, radial_base, 1e-12, true));
  CheckStep conclusion = inequality_step(
      "conclusion", radial_base, sides.base_energy.value,
      sides.base_energy.std_error, sides.base_energy.bias_bound.value_or(0.0),
      policy);
  conclusion.required = premise.holds;
  rep.steps.push_back(conclusion);
  if (!premise.holds) {
    rep.note = "premise fails numerically for this map; conclusion not implied";
  }

  rep.lhs = Estimate{radial_base, 0.0, 0, std::nullopt};
  rep.rhs = sides.base_energy;
  rep.margin = conclusion.margin;
  rep.tolerance = conclusion.tolerance;
  rep.passed = required_steps_hold(rep.steps);
  return rep;
}

}  // namespace pmin
