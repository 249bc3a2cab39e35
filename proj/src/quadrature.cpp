#include "pmin/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "format.hpp"
#include "pmin/closed_forms.hpp"

namespace pmin {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 block_engine(std::uint64_t seed, int block) {
  std::seed_seq seq{splitmix64(seed), splitmix64(seed ^ 0xa5a5a5a5ULL),
                    splitmix64(static_cast<std::uint64_t>(block) + 1)};
  return std::mt19937_64(seq);
}

Point random_direction(int n, std::mt19937_64& rng,
                       std::normal_distribution<double>& gauss) {
  Point d(n);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < n; ++i) d[i] = gauss(rng);
    norm2 = d.squaredNorm();
  } while (norm2 < 1e-20);
  return d / std::sqrt(norm2);
}

bool is_zero_exponent(double k) { return std::abs(k) < 1e-14; }

// Runs job(block) for each worker block, on threads when more than one.
template <class Job>
void run_blocks(int workers, Job&& job) {
  if (workers == 1) {
    job(0);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        job(w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool is_radial_projection(const SphereMap& u) { return u.label() == "radial"; }

void check_energy_inputs(const SphereMap& u, const EnergyParams& params,
                         const EnergyOptions& options) {
  if (u.dim_in() != params.n) {
    throw Error(ErrorCode::invalid_argument,
                "map " + u.label() + " is defined on B^" +
                    std::to_string(u.dim_in()) + ", energy requested on B^" +
                    std::to_string(params.n));
  }
  if (!params.sobolev_ok() && !options.allow_divergent) {
    if (is_radial_projection(u)) {
      throw Error(ErrorCode::divergent_energy,
                  "radial projection has infinite energy for p >= n + alpha");
    }
    throw Error(ErrorCode::divergent_energy,
                "importance density r^(alpha-p) is not integrable on B^" +
                    std::to_string(params.n) +
                    " for p >= n + alpha; pass allow_divergent to sample the "
                    "truncated integral");
  }
}

std::vector<Point> directions(int n, std::int64_t count, std::uint64_t seed) {
  auto rng = block_engine(seed ^ 0xd1ec7105ULL, 0);
  std::normal_distribution<double> gauss;
  std::vector<Point> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    dirs.push_back(random_direction(n, rng, gauss));
  }
  return dirs;
}

}  // namespace

const char* to_string(QuadratureMethod method) noexcept {
  switch (method) {
    case QuadratureMethod::monte_carlo: return "mc";
    case QuadratureMethod::radial_product: return "product";
  }
  return "unknown";
}

QuadratureMethod quadrature_method_from_string(const std::string& name) {
  if (name == "mc" || name == "monte_carlo") return QuadratureMethod::monte_carlo;
  if (name == "product" || name == "radial_product") {
    return QuadratureMethod::radial_product;
  }
  throw Error(ErrorCode::invalid_argument,
              "unknown quadrature method '" + name + "' (expected mc|product)");
}

void QuadratureSpec::validate() const {
  if (samples < 100) {
    throw Error(ErrorCode::invalid_argument,
                "samples must be >= 100, got " + std::to_string(samples));
  }
  if (!(r_min > 0.0 && r_min < 0.01)) {
    throw Error(ErrorCode::invalid_argument,
                "r_min must lie in (0, 0.01), got " +
                    detail::format_number(r_min));
  }
  if (workers < 1) {
    throw Error(ErrorCode::invalid_argument, "workers must be >= 1");
  }
  if (method == QuadratureMethod::radial_product && radial_nodes < 8) {
    throw Error(ErrorCode::invalid_argument,
                "radial_nodes must be >= 8 for the product rule, got " +
                    std::to_string(radial_nodes));
  }
}

BallSampler::BallSampler(int n, double beta, const QuadratureSpec& spec,
                         bool allow_non_integrable)
    : n_(n), beta_(beta), spec_(spec), mass_(0.0) {
  if (n < 2) {
    throw Error(ErrorCode::invalid_dimension, "ball dimension must be >= 2");
  }
  spec_.validate();
  const double k = n + beta;
  if (!(k > 0.0) && !allow_non_integrable) {
    throw Error(ErrorCode::non_integrable,
                "r^beta is not integrable on B^" + std::to_string(n) +
                    " for beta = " + detail::format_number(beta));
  }
  const double radial_mass = is_zero_exponent(k)
                                 ? -std::log(spec_.r_min)
                                 : (1.0 - std::pow(spec_.r_min, k)) / k;
  mass_ = sphere_measure(n - 1) * radial_mass;
}

std::int64_t BallSampler::block_begin(int block) const {
  return spec_.samples * block / spec_.workers;
}

std::vector<Point> BallSampler::block(int block) const {
  const std::int64_t begin = block_begin(block);
  const std::int64_t end = block_begin(block + 1);
  auto rng = block_engine(spec_.seed, block);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  const double k = n_ + beta_;
  const double rk = std::pow(spec_.r_min, k);

  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(end - begin));
  for (std::int64_t i = begin; i < end; ++i) {
    const double u = unif(rng);
    const double r = is_zero_exponent(k)
                         ? std::pow(spec_.r_min, 1.0 - u)
                         : std::pow(rk + u * (1.0 - rk), 1.0 / k);
    points.push_back(r * random_direction(n_, rng, gauss));
  }
  return points;
}

std::vector<Point> BallSampler::draw() const {
  std::vector<Point> all;
  all.reserve(static_cast<std::size_t>(spec_.samples));
  for (int b = 0; b < spec_.workers; ++b) {
    auto part = block(b);
    std::move(part.begin(), part.end(), std::back_inserter(all));
  }
  return all;
}

std::vector<double> sample_values(const BallSampler& sampler,
                                  const std::function<double(const Point&)>& f) {
  std::vector<double> values(static_cast<std::size_t>(sampler.size()));
  const int blocks = sampler.blocks();
  run_blocks(blocks, [&](int b) {
    const auto points = sampler.block(b);
    auto out = values.begin() + sampler.block_begin(b);
    for (const auto& x : points) *out++ = f(x);
  });
  return values;
}

namespace {

// Neumaier summation; near-constant integrands otherwise lose ~n*eps.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

Estimate estimate_from_values(const std::vector<double>& values, double mass) {
  const auto count = static_cast<double>(values.size());
  CompensatedSum total;
  for (double v : values) total.add(v);
  const double mean = total.value() / count;
  CompensatedSum dev;
  for (double v : values) dev.add((v - mean) * (v - mean));
  const double sq = dev.value();
  const double var = values.size() > 1 ? sq / (count - 1.0) : 0.0;
  return Estimate{mass * mean, std::abs(mass) * std::sqrt(var / count),
                  static_cast<std::int64_t>(values.size()), std::nullopt};
}

Estimate integrate_ball(int n, double beta, const QuadratureSpec& spec,
                        const std::function<double(const Point&)>& f) {
  const BallSampler sampler(n, beta, spec);
  return estimate_from_values(sample_values(sampler, f), sampler.mass());
}

double energy_density_ratio(const SphereMap& u, const EnergyParams& params,
                            const Point& x) {
  const double r = x.norm();
  const double g2 = gradient_norm_sq(u, x).value;
  return std::pow(r * r * g2, params.p / 2.0);
}

std::vector<double> energy_samples(const SphereMap& u, const EnergyParams& params,
                                   const QuadratureSpec& spec,
                                   const EnergyOptions& options) {
  check_energy_inputs(u, params, options);
  const BallSampler sampler(params.n, params.alpha - params.p, spec,
                            options.allow_divergent);
  return sample_values(sampler, [&](const Point& x) {
    return energy_density_ratio(u, params, x);
  });
}

Estimate energy(const SphereMap& u, const EnergyParams& params,
                const QuadratureSpec& spec, const EnergyOptions& options) {
  if (spec.method == QuadratureMethod::radial_product) {
    return radial_product_energy(u, params, spec, options);
  }
  check_energy_inputs(u, params, options);
  const BallSampler sampler(params.n, params.alpha - params.p, spec,
                            options.allow_divergent);
  const auto values = sample_values(sampler, [&](const Point& x) {
    return energy_density_ratio(u, params, x);
  });
  Estimate est = estimate_from_values(values, sampler.mass());
  const double k = params.n + params.alpha - params.p;
  if (k > 0.0) {
    const double sup = *std::max_element(values.begin(), values.end());
    est.bias_bound =
        sphere_measure(params.n - 1) * std::pow(spec.r_min, k) / k * sup;
  }
  return est;
}

RadialRule gauss_jacobi_radial(int nodes, double gamma) {
  if (nodes < 1) {
    throw Error(ErrorCode::invalid_argument, "need at least one radial node");
  }
  if (!(gamma > -1.0)) {
    throw Error(ErrorCode::non_integrable,
                "Gauss-Jacobi weight r^gamma needs gamma > -1");
  }
  // Golub-Welsch on [-1, 1] for (1+x)^b, then x -> (1+x)/2.
  const double b = gamma;
  Matrix jacobi = Matrix::Zero(nodes, nodes);
  for (int k = 0; k < nodes; ++k) {
    const double s = 2.0 * k + b;
    jacobi(k, k) = k == 0 ? b / (b + 2.0) : b * b / (s * (s + 2.0));
    if (k + 1 < nodes) {
      const double k1 = k + 1.0;
      const double s1 = 2.0 * k1 + b;
      const double beta_k = 4.0 * k1 * k1 * (k1 + b) * (k1 + b) /
                            (s1 * s1 * (s1 + 1.0) * (s1 - 1.0));
      jacobi(k, k + 1) = std::sqrt(beta_k);
      jacobi(k + 1, k) = jacobi(k, k + 1);
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
  // mu0 = 2^{b+1}/(b+1); the map to [0, 1] scales weights by 2^{-(b+1)}.
  const double mass = 1.0 / (b + 1.0);
  RadialRule rule;
  rule.nodes.resize(nodes);
  rule.weights.resize(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double v0 = eig.eigenvectors()(0, k);
    rule.nodes[k] = (1.0 + eig.eigenvalues()[k]) / 2.0;
    rule.weights[k] = mass * v0 * v0;
  }
  return rule;
}

Estimate radial_product_energy(const SphereMap& u, const EnergyParams& params,
                               const QuadratureSpec& spec,
                               const EnergyOptions& options) {
  QuadratureSpec checked = spec;
  checked.method = QuadratureMethod::radial_product;
  checked.validate();
  check_energy_inputs(u, params, options);
  const int n = params.n;
  const double gamma = n - 1.0 + params.alpha - params.p;
  if (!(gamma > -1.0)) {
    throw Error(ErrorCode::divergent_energy,
                "product rule needs p < n + alpha");
  }
  const int k_full = spec.radial_nodes;
  const int k_half = k_full / 2;
  const RadialRule full = gauss_jacobi_radial(k_full, gamma);
  const RadialRule half = gauss_jacobi_radial(k_half, gamma);
  const auto dirs = directions(n, spec.samples, spec.seed);

  auto radial_integral = [&](const RadialRule& rule, const Point& dir) {
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      acc += rule.weights[k] *
             energy_density_ratio(u, params, rule.nodes[k] * dir);
    }
    return acc;
  };

  std::vector<double> per_dir_full(dirs.size());
  std::vector<double> per_dir_half(dirs.size());
  const int workers = std::min<std::int64_t>(spec.workers, spec.samples);
  run_blocks(workers, [&](int w) {
    const std::size_t begin = dirs.size() * w / workers;
    const std::size_t end = dirs.size() * (w + 1) / workers;
    for (std::size_t j = begin; j < end; ++j) {
      per_dir_full[j] = radial_integral(full, dirs[j]);
      per_dir_half[j] = radial_integral(half, dirs[j]);
    }
  });

  const double area = sphere_measure(n - 1);
  Estimate est = estimate_from_values(per_dir_full, area);
  const Estimate coarse = estimate_from_values(per_dir_half, area);
  const double discretization = std::abs(est.value - coarse.value);
  est.std_error = std::hypot(est.std_error, discretization);
  est.n_eval = static_cast<std::int64_t>(dirs.size()) * (k_full + k_half);
  return est;
}

}  // namespace pmin
