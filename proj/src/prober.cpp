#include "pmin/prober.hpp"

#include <algorithm>
#include <cmath>

#include "pmin/closed_forms.hpp"

namespace pmin {

namespace {

struct PairedStream {
  BallSampler sampler;
  std::vector<double> reference;  // values of u_0
};

PairedStream make_stream(const EnergyParams& params, const QuadratureSpec& spec) {
  PairedStream s{BallSampler(params.n, params.alpha - params.p, spec), {}};
  const SphereMap u0 = radial_projection(params.n);
  s.reference = sample_values(s.sampler, [&](const Point& x) {
    return energy_density_ratio(u0, params, x);
  });
  return s;
}

std::vector<double> member_values(const PairedStream& stream,
                                  const EnergyParams& params,
                                  const SphereMap& u) {
  return sample_values(stream.sampler, [&](const Point& x) {
    return energy_density_ratio(u, params, x);
  });
}

Estimate difference_estimate(const std::vector<double>& a,
                             const std::vector<double>& b, double mass) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return estimate_from_values(d, mass);
}

void check_probe_params(const EnergyParams& params) {
  if (!params.sobolev_ok()) {
    throw Error(ErrorCode::divergent_energy,
                "probing needs p < n + alpha (finite reference energy)");
  }
}

}  // namespace

std::string FamilySpec::label() const {
  if (kind == FamilyKind::rotation) {
    return "rotation:plane=" + std::to_string(plane.first) + "," +
           std::to_string(plane.second);
  }
  if (field == "swirl") {
    return "perturbation:field=swirl:plane=" + std::to_string(plane.first) +
           "," + std::to_string(plane.second);
  }
  return "perturbation:field=const:axis=" + std::to_string(axis);
}

FamilySpec family_from_string(const std::string& name) {
  FamilySpec f;
  if (name == "rotation") {
    f.kind = FamilyKind::rotation;
  } else if (name == "perturbation" || name == "perturb") {
    f.kind = FamilyKind::perturbation;
  } else {
    throw Error(ErrorCode::unknown_label,
                "unknown family '" + name + "' (expected rotation|perturbation)");
  }
  return f;
}

SphereMap family_member(int n, const FamilySpec& family, double t) {
  if (family.kind == FamilyKind::rotation) {
    return rotation_family(n, t, family.plane);
  }
  const int axis = family.axis < 0 ? n - 1 : family.axis;
  const VectorField field =
      family.field == "swirl"
          ? swirl_field(n, family.plane.first, family.plane.second)
      : family.field == "const"
          ? constant_field(n, axis)
          : throw Error(ErrorCode::unknown_label,
                        "unknown perturbation field '" + family.field + "'");
  return perturbation_family(radial_projection(n), field, t);
}

std::vector<double> linear_grid(double t_min, double t_max, int steps) {
  if (steps < 2 || !(t_max > t_min)) {
    throw Error(ErrorCode::invalid_argument,
                "grid needs steps >= 2 and t_max > t_min");
  }
  std::vector<double> grid(steps);
  const double dt = (t_max - t_min) / (steps - 1);
  for (int k = 0; k < steps; ++k) {
    grid[k] = ((steps - 1 - k) * t_min + k * t_max) / (steps - 1);
    if (std::abs(grid[k]) < dt / 2.0) grid[k] = 0.0;
  }
  return grid;
}

ProbeResult probe_family(const EnergyParams& params, const FamilySpec& family,
                         const std::vector<double>& grid,
                         const QuadratureSpec& spec,
                         const ProbeOptions& options) {
  check_probe_params(params);
  if (std::find(grid.begin(), grid.end(), 0.0) == grid.end()) {
    throw Error(ErrorCode::invalid_argument, "probe grid must contain 0");
  }
  const PairedStream stream = make_stream(params, spec);
  const double mass = stream.sampler.mass();

  ProbeResult res;
  res.params = params;
  res.family = family.label();
  res.spec = spec;
  res.reference_energy = radial_energy_closed_form(params);

  bool first = true;
  for (double t : grid) {
    const SphereMap u = family_member(params.n, family, t);
    const auto values = member_values(stream, params, u);
    GridEnergy g;
    g.parameter = t;
    g.energy = estimate_from_values(values, mass);
    g.difference = difference_estimate(values, stream.reference, mass);
    if (first || g.difference.value < res.min_margin) {
      res.min_margin = g.difference.value;
      res.min_margin_sigma = g.difference.std_error;
      res.argmin = t;
      first = false;
    }
    if (g.difference.value < -options.sigmas * g.difference.std_error) {
      res.concordant = false;
    }
    res.energies.push_back(g);
  }

  if (options.second_variation) {
    res.second_variation =
        second_variation(params, family, spec, options.second_variation_step);
  }

  if (options.refine) {
    // Golden-section search on the bracket around the grid minimum.
    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    const auto it = std::find(sorted.begin(), sorted.end(), res.argmin);
    double lo = it == sorted.begin() ? *it : *(it - 1);
    double hi = it + 1 == sorted.end() ? *it : *(it + 1);
    auto diff_at = [&](double t) {
      const auto values =
          member_values(stream, params, family_member(params.n, family, t));
      return difference_estimate(values, stream.reference, mass);
    };
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    Estimate fa = diff_at(a);
    Estimate fb = diff_at(b);
    int evals = 2;
    for (int i = 0; i < options.refine_iterations; ++i) {
      if (fa.value < fb.value) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - ratio * (hi - lo);
        fa = diff_at(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + ratio * (hi - lo);
        fb = diff_at(b);
      }
      ++evals;
    }
    Refinement ref;
    ref.parameter = fa.value < fb.value ? a : b;
    ref.difference = fa.value < fb.value ? fa : fb;
    ref.evaluations = evals;
    res.refinement = ref;
  }
  return res;
}

SecondVariation second_variation(const EnergyParams& params,
                                 const FamilySpec& family,
                                 const QuadratureSpec& spec, double h) {
  check_probe_params(params);
  if (!(h > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "second-variation step must be > 0");
  }
  const PairedStream stream = make_stream(params, spec);
  const double mass = stream.sampler.mass();
  const auto plus = member_values(stream, params, family_member(params.n, family, h));
  const auto minus =
      member_values(stream, params, family_member(params.n, family, -h));

  std::vector<double> second(plus.size());
  std::vector<double> first(plus.size());
  for (std::size_t i = 0; i < plus.size(); ++i) {
    second[i] = (plus[i] - 2.0 * stream.reference[i] + minus[i]) / (h * h);
    first[i] = (plus[i] - minus[i]) / (2.0 * h);
  }
  const Estimate s = estimate_from_values(second, mass);
  const Estimate f = estimate_from_values(first, mass);
  return SecondVariation{h, s.value, s.std_error, f.value, f.std_error};
}

}  // namespace pmin
