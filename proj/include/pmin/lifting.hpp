#pragma once

#include "pmin/core_maps.hpp"

namespace pmin {

// (x_1, ..., x_{n+1}) -> (x_1, ..., x_n).
Point project(const Point& x);

// Pi(x)/|Pi(x)| embedded in R^n x {0}, so the result has the length of x.
// Throws axis_singularity on the vertical axis R e_{n+1}.
Point phi(const Point& x);

// The map on B^{n+1} built from a base map u : B^n -> S^{n-1},
//   ubar(x) = <e_{n+1}, x/|x|> e_{n+1} + <phi(x), x/|x|> u(|x| phi(x)).
// It restricts to u on B^n x {0}, equals x on S^n when u(y) = y on S^{n-1},
// and lifts x/|x| to x/|x|.
class LiftedMap {
 public:
  explicit LiftedMap(SphereMap base);

  const SphereMap& base() const { return base_; }
  int dim_in() const { return base_.dim_in() + 1; }

  Point evaluate(const Point& x) const;

  // The base-map argument |x| phi(x) as a point of R^n.
  Point preimage(const Point& x) const;

  // ubar as a SphereMap on B^{n+1}. Carries a chain-rule jacobian when the
  // base map has an analytic one.
  const SphereMap& as_sphere_map() const { return lifted_; }

 private:
  SphereMap base_;
  SphereMap lifted_;
};

LiftedMap lift(const SphereMap& base);

// 1/|x|^2 + |grad u(y)|^2 at y = |x| phi(x). An upper bound for
// |grad ubar(x)|^2, attained when u is 0-homogeneous near y or x_{n+1} = 0.
GradientNormSq lifted_gradient_norm_sq(const LiftedMap& lifted, const Point& x);

// |du(y) y/|y||^2, analytic when u carries a jacobian.
double radial_derivative_sq(const SphereMap& u, const Point& y);

// |grad ubar(x)|^2 = 1/|x|^2 + |grad u(y)|^2 - (x_{n+1}/|x|)^2 |du(y) y/|y||^2.
GradientNormSq lifted_gradient_norm_sq_exact(const LiftedMap& lifted,
                                             const Point& x);

// Horizontal slice {x_{n+1} = x_last} of B^{n+1}, minus the axis.
struct SliceChart {
  int n = 2;
  double x_last = 0.5;

  // Validates n >= 2 and 0 < x_last < 1.
  static SliceChart make(int n, double x_last);
};

// x -> |x| phi(x) in R^n; |theta(x)| = |x| > x_last.
Point theta(const SliceChart& chart, const Point& x);

// y -> (sqrt(|y|^2 - x_last^2) y/|y|, x_last); requires |y| > x_last + 1e-9.
Point theta_inverse(const SliceChart& chart, const Point& y);

// Jac(theta^{-1})(y) = (|y|^2 - x_last^2)^{(n-2)/2} / |y|^{n-2}.
double theta_inverse_jacobian(const SliceChart& chart, const Point& y);

// Jac(theta)(x) = |x|^{n-2} / |Pi(x)|^{n-2}.
double theta_jacobian(const SliceChart& chart, const Point& x);

}  // namespace pmin
