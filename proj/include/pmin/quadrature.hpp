#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pmin/core_maps.hpp"

namespace pmin {

enum class QuadratureMethod { monte_carlo, radial_product };

const char* to_string(QuadratureMethod method) noexcept;
QuadratureMethod quadrature_method_from_string(const std::string& name);

struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::monte_carlo;
  // MC sample count, or number of sphere directions for the product rule.
  std::int64_t samples = 100000;
  int radial_nodes = 32;
  std::uint64_t seed = 1;
  double r_min = 1e-6;
  // Independent sample streams; results depend on (seed, workers).
  int workers = 1;

  // Throws invalid_argument unless samples >= 100, 0 < r_min < 0.01,
  // workers >= 1 and (product rule) radial_nodes >= 8.
  void validate() const;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_eval = 0;
  // Bound on the integral over the excluded core |x| < r_min, when finite.
  std::optional<double> bias_bound;
};

// Draws points of B^n with radial density proportional to r^{n-1+beta} on
// [r_min, 1] and uniform directions. Every sample carries the same weight, so
// sum_k weight f(x_k) is unbiased for int_{r > r_min} f |x|^beta dx.
//
// Samples are split into `spec.workers` contiguous blocks, each drawn from its
// own generator seeded from (seed, block index).
class BallSampler {
 public:
  // Throws non_integrable when beta <= -n unless allow_non_integrable is set,
  // in which case the truncated integral over [r_min, 1] is still sampled.
  BallSampler(int n, double beta, const QuadratureSpec& spec,
              bool allow_non_integrable = false);

  int dimension() const { return n_; }
  double beta() const { return beta_; }
  std::int64_t size() const { return spec_.samples; }
  int blocks() const { return spec_.workers; }
  // int_{r_min < |x| < 1} |x|^beta dx.
  double mass() const { return mass_; }
  double weight() const { return mass_ / static_cast<double>(spec_.samples); }

  // Samples of worker block `block`, in order. Same seed => same points.
  std::vector<Point> block(int block) const;
  std::int64_t block_begin(int block) const;

  // All samples, block after block.
  std::vector<Point> draw() const;

 private:
  int n_;
  double beta_;
  QuadratureSpec spec_;
  double mass_;
};

// Weighted integrand values f(x_k) for every sample of `sampler`, evaluated
// across the sampler's worker blocks. The estimate of int f |x|^beta is
// sampler.mass() * mean(values).
std::vector<double> sample_values(const BallSampler& sampler,
                                  const std::function<double(const Point&)>& f);

// Mean/standard error of mass * values.
Estimate estimate_from_values(const std::vector<double>& values, double mass);

// int_{r_min < |x| < 1} f(x) |x|^beta dx by Monte Carlo.
Estimate integrate_ball(int n, double beta, const QuadratureSpec& spec,
                        const std::function<double(const Point&)>& f);

struct EnergyOptions {
  // Skip the divergence guard for the radial projection when p >= n + alpha.
  bool allow_divergent = false;
};

// Integrand of the energy after importance weighting with beta = alpha - p:
// |x|^alpha |grad u|^p / |x|^beta = (|x| |grad u(x)|)^p.
double energy_density_ratio(const SphereMap& u, const EnergyParams& params,
                            const Point& x);

// Per-sample values of the energy integrand on the stream for
// (params.n, beta = alpha - p, spec). Shared by callers that pair samples
// across maps (common random numbers).
std::vector<double> energy_samples(const SphereMap& u, const EnergyParams& params,
                                   const QuadratureSpec& spec,
                                   const EnergyOptions& options = {});

// E^n_{p,alpha}(u) by Monte Carlo (or by the product rule when
// spec.method == radial_product).
Estimate energy(const SphereMap& u, const EnergyParams& params,
                const QuadratureSpec& spec, const EnergyOptions& options = {});

// Gauss-Jacobi rule on [0, 1] for the weight r^gamma, gamma > -1.
struct RadialRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
RadialRule gauss_jacobi_radial(int nodes, double gamma);

// Deterministic product rule: Gauss-Jacobi radial nodes for the weight
// r^{n-1+alpha-p} times `spec.samples` equal-weight directions. The error
// combines the angular standard error with |Q_K - Q_{K/2}|.
Estimate radial_product_energy(const SphereMap& u, const EnergyParams& params,
                               const QuadratureSpec& spec,
                               const EnergyOptions& options = {});

}  // namespace pmin
