#include "pmin/lifting.hpp"

#include <algorithm>
#include <cmath>

#include "format.hpp"

namespace pmin {

namespace {

void require_lift_point(const Point& x, int expected) {
  if (x.size() != expected) {
    throw Error(ErrorCode::invalid_argument,
                "expected a point of R^" + std::to_string(expected) +
                    ", got dimension " + std::to_string(x.size()));
  }
}

double axis_distance(const Point& x) {
  const double rho = x.head(x.size() - 1).norm();
  if (!(rho > kSingularRadius)) {
    throw Error(ErrorCode::axis_singularity,
                "point lies on the vertical axis (|Pi(x)| = " +
                    detail::format_number(rho) + ")");
  }
  return rho;
}

}  // namespace

Point project(const Point& x) {
  if (x.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "project needs dimension >= 2");
  }
  return x.head(x.size() - 1);
}

Point phi(const Point& x) {
  const double rho = axis_distance(x);
  Point out = Point::Zero(x.size());
  out.head(x.size() - 1) = x.head(x.size() - 1) / rho;
  return out;
}

namespace {

const SphereMap& checked_base(const SphereMap& base) {
  if (base.dim_in() < 2 || base.dim_out() != base.dim_in()) {
    throw Error(ErrorCode::invalid_dimension,
                "lift needs a base map B^n -> S^{n-1} with n >= 2");
  }
  return base;
}

SphereMap make_lifted(const SphereMap& b) {
  const int n = b.dim_in();
  auto eval = [b, n](const Point& x) -> Point {
    require_lift_point(x, n + 1);
    const double rho = axis_distance(x);
    const double r = x.norm();
    const Point y = (r / rho) * x.head(n);
    Point out(n + 1);
    out.head(n) = (rho / r) * b.evaluate(y);
    out[n] = x[n] / r;
    return out;
  };
  std::optional<SphereMap::JacFn> jac;
  if (b.has_jacobian()) {
    jac = [b, n](const Point& x) -> Matrix {
      require_lift_point(x, n + 1);
      const double rho = axis_distance(x);
      const double r = x.norm();
      const double z = x[n];
      Point pe = Point::Zero(n + 1);  // Pi(x) embedded
      pe.head(n) = x.head(n);
      const Point y = (r / rho) * x.head(n);
      const Point uy = b.evaluate(y);
      const Matrix ju = b.jacobian(y);

      Point e_last = Point::Zero(n + 1);
      e_last[n] = 1.0;
      const Point grad_height = e_last / r - z * x / (r * r * r);
      const Point grad_scale = pe / (rho * r) - rho * x / (r * r * r);
      const Point grad_stretch = x / (r * rho) - r * pe / (rho * rho * rho);

      // dy/dx = (r/rho) [I | 0] + Pi(x) grad(r/rho)^T
      Matrix dy = Matrix::Zero(n, n + 1);
      dy.leftCols(n) = (r / rho) * Matrix::Identity(n, n);
      dy += x.head(n) * grad_stretch.transpose();

      Matrix out = e_last * grad_height.transpose();
      Point ue = Point::Zero(n + 1);
      ue.head(n) = uy;
      out += ue * grad_scale.transpose();
      out.topRows(n) += (rho / r) * ju * dy;
      return out;
    };
  }
  return SphereMap(n + 1, n + 1, "lift(" + b.label() + ")", eval, jac);
}

}  // namespace

LiftedMap::LiftedMap(SphereMap base)
    : base_(checked_base(base)), lifted_(make_lifted(base_)) {}

Point LiftedMap::evaluate(const Point& x) const { return lifted_.evaluate(x); }

Point LiftedMap::preimage(const Point& x) const {
  require_lift_point(x, dim_in());
  const double rho = axis_distance(x);
  return (x.norm() / rho) * x.head(x.size() - 1);
}

LiftedMap lift(const SphereMap& base) { return LiftedMap(base); }

GradientNormSq lifted_gradient_norm_sq(const LiftedMap& lifted,
                                       const Point& x) {
  const Point y = lifted.preimage(x);
  const double r = x.norm();
  if (!(r > kSingularRadius)) {
    throw Error(ErrorCode::singular_point, "lifted gradient at the origin");
  }
  return GradientNormSq{1.0 / (r * r) +
                        gradient_norm_sq(lifted.base(), y).value};
}

double radial_derivative_sq(const SphereMap& u, const Point& y) {
  const double s = y.norm();
  if (!(s > kSingularRadius)) {
    throw Error(ErrorCode::singular_point, "radial derivative at the origin");
  }
  const Point dir = y / s;
  if (u.has_jacobian()) return (u.jacobian(y) * dir).squaredNorm();
  const double h = fd_step(y);
  return ((u.evaluate(y + h * dir) - u.evaluate(y - h * dir)) / (2.0 * h))
      .squaredNorm();
}

GradientNormSq lifted_gradient_norm_sq_exact(const LiftedMap& lifted,
                                             const Point& x) {
  const double bound = lifted_gradient_norm_sq(lifted, x).value;
  const double r = x.norm();
  const double v = x[x.size() - 1] / r;
  return GradientNormSq{
      bound - v * v * radial_derivative_sq(lifted.base(), lifted.preimage(x))};
}

SliceChart SliceChart::make(int n, double x_last) {
  if (n < 2) {
    throw Error(ErrorCode::invalid_dimension, "slice chart needs n >= 2");
  }
  if (!(x_last > 0.0 && x_last < 1.0)) {
    throw Error(ErrorCode::invalid_argument,
                "slice height must lie in (0, 1), got " +
                    detail::format_number(x_last));
  }
  return SliceChart{n, x_last};
}

Point theta(const SliceChart& chart, const Point& x) {
  require_lift_point(x, chart.n + 1);
  if (std::abs(x[chart.n] - chart.x_last) > 1e-12) {
    throw Error(ErrorCode::wrong_slice,
                "point has x_{n+1} = " + detail::format_number(x[chart.n]) +
                    ", chart slice is " + detail::format_number(chart.x_last));
  }
  const double rho = axis_distance(x);
  return (x.norm() / rho) * x.head(chart.n);
}

namespace {

double checked_chart_radius(const SliceChart& chart, const Point& y) {
  require_lift_point(y, chart.n);
  const double s = y.norm();
  if (!(s > chart.x_last + kSingularRadius)) {
    throw Error(ErrorCode::outside_chart,
                "|y| = " + detail::format_number(s) +
                    " is not above the slice height " +
                    detail::format_number(chart.x_last));
  }
  return s;
}

}  // namespace

Point theta_inverse(const SliceChart& chart, const Point& y) {
  const double s = checked_chart_radius(chart, y);
  const double c = chart.x_last;
  Point x(chart.n + 1);
  x.head(chart.n) = std::sqrt(s * s - c * c) / s * y;
  x[chart.n] = c;
  return x;
}

double theta_inverse_jacobian(const SliceChart& chart, const Point& y) {
  const double s = checked_chart_radius(chart, y);
  const double c = chart.x_last;
  const double e = (chart.n - 2) / 2.0;
  return std::pow(s * s - c * c, e) / std::pow(s, chart.n - 2);
}

double theta_jacobian(const SliceChart& chart, const Point& x) {
  require_lift_point(x, chart.n + 1);
  if (std::abs(x[chart.n] - chart.x_last) > 1e-12) {
    throw Error(ErrorCode::wrong_slice, "point is not on the chart slice");
  }
  const double rho = axis_distance(x);
  return std::pow(x.norm() / rho, chart.n - 2);
}

}  // namespace pmin
