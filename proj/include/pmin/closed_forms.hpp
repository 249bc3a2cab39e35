#pragma once

#include "pmin/core_maps.hpp"

namespace pmin {

// W_m = int_0^{pi/2} cos^m(g) dg.
struct WallisValue {
  int m = 0;
  double value = 0.0;
};

// log Gamma(x) for x > 0.
double log_gamma(double x);

// Recurrence W_m = (m-1)/m W_{m-2} from W_0 = pi/2, W_1 = 1.
WallisValue wallis(int m);

// W_{n-1} Gamma((n+1)/2) / Gamma(n/2); equals sqrt(pi)/2 for every n >= 2.
double lemma4_identity(int n);

// Surface measure of S^m in R^{m+1}: 2 pi^{(m+1)/2} / Gamma((m+1)/2).
double sphere_measure(int m);

// Exact E^n_{p,alpha}(x/|x|) = (n-1)^{p/2} |S^{n-1}| / (n + alpha - p).
// Throws divergent_energy when p >= n + alpha.
double radial_energy_closed_form(const EnergyParams& params);

// int_{B^n} |x|^beta dx = |S^{n-1}| / (n + beta); non_integrable if
// beta <= -n.
double ball_power_integral(int n, double beta);

// Constants of the lifted-energy bound for a base map on B^n:
//   c1 = n^{p/2-1},  c2 = 2 (1 - 1/n)^{1-p/2} W_{n-1}.
struct LiftBoundConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

LiftBoundConstants lemma3_rhs_constants(int n, double p);

// Residual of the pointwise convexity split with a = 1/|x|^2, b = |grad u|^2:
//   n^{p/2-1} a^{p/2} + (1-1/n)^{1-p/2} b^{p/2} - (a+b)^{p/2}.
// Nonnegative for p >= 2; for p < 2 it is nonpositive (concavity).
double convexity_split_residual(int n, double p, double a, double b);

}  // namespace pmin
