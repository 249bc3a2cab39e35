#include "pmin/closed_forms.hpp"

#include <cmath>
#include <numbers>

#include "format.hpp"

namespace pmin {

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::domain_error,
                "log_gamma requires x > 0, got " + detail::format_number(x));
  }
  return std::lgamma(x);
}

WallisValue wallis(int m) {
  if (m < 0) {
    throw Error(ErrorCode::domain_error, "wallis index must be >= 0");
  }
  double even = std::numbers::pi / 2.0;  // W_0
  double odd = 1.0;                      // W_1
  double w = (m % 2 == 0) ? even : odd;
  for (int k = (m % 2 == 0) ? 2 : 3; k <= m; k += 2) {
    w *= static_cast<double>(k - 1) / static_cast<double>(k);
  }
  return WallisValue{m, w};
}

double lemma4_identity(int n) {
  if (n < 2) {
    throw Error(ErrorCode::invalid_dimension, "lemma4_identity requires n >= 2");
  }
  const double ratio = std::exp(log_gamma((n + 1) / 2.0) - log_gamma(n / 2.0));
  return wallis(n - 1).value * ratio;
}

double sphere_measure(int m) {
  if (m < 1) {
    throw Error(ErrorCode::invalid_dimension, "sphere_measure requires m >= 1");
  }
  const double half = (m + 1) / 2.0;
  return 2.0 * std::exp(half * std::log(std::numbers::pi) - log_gamma(half));
}

double ball_power_integral(int n, double beta) {
  if (!(beta > -static_cast<double>(n))) {
    throw Error(ErrorCode::non_integrable,
                "|x|^beta is not integrable on B^" + std::to_string(n) +
                    " for beta = " + detail::format_number(beta));
  }
  return sphere_measure(n - 1) / (n + beta);
}

double radial_energy_closed_form(const EnergyParams& params) {
  if (!params.sobolev_ok()) {
    throw Error(ErrorCode::divergent_energy,
                "x/|x| has infinite energy for p >= n + alpha (n=" +
                    std::to_string(params.n) +
                    ", p=" + detail::format_number(params.p) +
                    ", alpha=" + detail::format_number(params.alpha) + ")");
  }
  const int n = params.n;
  return std::pow(n - 1.0, params.p / 2.0) * sphere_measure(n - 1) /
         (n + params.alpha - params.p);
}

LiftBoundConstants lemma3_rhs_constants(int n, double p) {
  if (n < 2) {
    throw Error(ErrorCode::invalid_dimension, "lift constants need n >= 2");
  }
  if (!(p >= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "lift constants need p >= 1");
  }
  const double nd = n;
  return LiftBoundConstants{
      std::pow(nd, p / 2.0 - 1.0),
      2.0 * std::pow(1.0 - 1.0 / nd, 1.0 - p / 2.0) * wallis(n - 1).value};
}

double convexity_split_residual(int n, double p, double a, double b) {
  const double nd = n;
  const double q = p / 2.0;
  return std::pow(nd, q - 1.0) * std::pow(a, q) +
         std::pow(1.0 - 1.0 / nd, 1.0 - q) * std::pow(b, q) -
         std::pow(a + b, q);
}

}  // namespace pmin
