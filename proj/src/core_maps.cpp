#include "pmin/core_maps.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "format.hpp"

namespace pmin {

using detail::format_number;

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::invalid_plane: return "invalid-plane";
    case ErrorCode::singular_point: return "singular-point";
    case ErrorCode::axis_singularity: return "axis-singularity";
    case ErrorCode::outside_chart: return "outside-chart";
    case ErrorCode::wrong_slice: return "wrong-slice";
    case ErrorCode::divergent_energy: return "divergent-energy";
    case ErrorCode::degenerate_perturbation: return "degenerate-perturbation";
    case ErrorCode::non_integrable: return "non-integrable";
    case ErrorCode::domain_error: return "domain-error";
    case ErrorCode::unknown_label: return "unknown-label";
  }
  return "unknown-error";
}

EnergyParams EnergyParams::make(int n, double p, double alpha) {
  if (n < 2) {
    throw Error(ErrorCode::invalid_dimension,
                "dimension n must be >= 2, got " + std::to_string(n));
  }
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::invalid_argument,
                "exponent p must be >= 1, got " + format_number(p));
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::invalid_argument,
                "weight alpha must be >= 0, got " + format_number(alpha));
  }
  return EnergyParams{n, p, alpha};
}

SphereMap::SphereMap(int dim_in, int dim_out, std::string label,
                     EvalFn evaluate, std::optional<JacFn> jacobian)
    : dim_in_(dim_in),
      dim_out_(dim_out),
      label_(std::move(label)),
      evaluate_(std::move(evaluate)),
      jacobian_(std::move(jacobian)) {}

void SphereMap::check_input(const Point& x) const {
  if (x.size() != dim_in_) {
    throw Error(ErrorCode::invalid_dimension,
                label_ + ": expected a point of dimension " +
                    std::to_string(dim_in_) + ", got " +
                    std::to_string(x.size()));
  }
}

Point SphereMap::evaluate(const Point& x) const {
  check_input(x);
  return evaluate_(x);
}

Matrix SphereMap::jacobian(const Point& x) const {
  check_input(x);
  if (!jacobian_) {
    throw Error(ErrorCode::invalid_argument,
                label_ + ": no analytic jacobian available");
  }
  return (*jacobian_)(x);
}

SphereMap SphereMap::without_jacobian() const {
  return SphereMap(dim_in_, dim_out_, label_, evaluate_);
}

namespace {

void require_dimension(int n) {
  if (n < 2) {
    throw Error(ErrorCode::invalid_dimension,
                "map dimension must be >= 2, got " + std::to_string(n));
  }
}

double checked_norm(const Point& x, const std::string& label) {
  const double r = x.norm();
  if (!(r > kSingularRadius)) {
    throw Error(ErrorCode::singular_point,
                label + ": evaluation at the singular origin (|x| = " +
                    format_number(r) + ")");
  }
  return r;
}

// Applies the rotation by `angle` in the (i, j) coordinate plane.
void rotate_in_plane(Point& v, double angle, int i, int j) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double vi = v[i];
  const double vj = v[j];
  v[i] = c * vi - s * vj;
  v[j] = s * vi + c * vj;
}

}  // namespace

VectorField constant_field(int n, int axis) {
  if (axis < 0 || axis >= n) {
    throw Error(ErrorCode::invalid_argument,
                "field axis " + std::to_string(axis) + " out of range");
  }
  return VectorField{
      "const:axis=" + std::to_string(axis),
      [n, axis](const Point&) {
        Point v = Point::Zero(n);
        v[axis] = 1.0;
        return v;
      },
      [n](const Point&) { return Matrix(Matrix::Zero(n, n)); }};
}

VectorField swirl_field(int n, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw Error(ErrorCode::invalid_plane, "swirl plane indices must be "
                                          "distinct and < n");
  }
  return VectorField{
      "swirl:plane=" + std::to_string(i) + "," + std::to_string(j),
      [n, i, j](const Point& y) {
        Point v = Point::Zero(n);
        v[i] = -y[j];
        v[j] = y[i];
        return v;
      },
      [n, i, j](const Point&) {
        Matrix m = Matrix::Zero(n, n);
        m(i, j) = -1.0;
        m(j, i) = 1.0;
        return m;
      }};
}

SphereMap radial_projection(int n) {
  require_dimension(n);
  const std::string label = "radial";
  auto eval = [label](const Point& x) -> Point {
    return x / checked_norm(x, label);
  };
  auto jac = [label, n](const Point& x) -> Matrix {
    const double r = checked_norm(x, label);
    const Point xhat = x / r;
    return (Matrix::Identity(n, n) - xhat * xhat.transpose()) / r;
  };
  return SphereMap(n, n, label, eval, SphereMap::JacFn(jac));
}

SphereMap rotation_family(int n, double t, std::pair<int, int> plane) {
  require_dimension(n);
  const auto [pi, pj] = plane;
  if (pi == pj) {
    throw Error(ErrorCode::invalid_plane,
                "rotation plane indices must be distinct");
  }
  if (pi < 0 || pj < 0 || pi >= n || pj >= n) {
    throw Error(ErrorCode::invalid_plane,
                "rotation plane indices must be < n = " + std::to_string(n));
  }
  const std::string label = "rotation:t=" + format_number(t) +
                            ":plane=" + std::to_string(pi) + "," +
                            std::to_string(pj);
  auto eval = [label, t, pi, pj](const Point& y) -> Point {
    const double s = checked_norm(y, label);
    Point u = y / s;
    rotate_in_plane(u, t * (1.0 - s), pi, pj);
    return u;
  };
  auto jac = [label, n, t, pi, pj](const Point& y) -> Matrix {
    const double s = checked_norm(y, label);
    const Point yhat = y / s;
    const double a = t * (1.0 - s);
    // R(a) (I - y^ y^T)/s  +  R'(a) y^ (-t y^T)
    Matrix m = (Matrix::Identity(n, n) - yhat * yhat.transpose()) / s;
    for (int col = 0; col < n; ++col) {
      Point c = m.col(col);
      rotate_in_plane(c, a, pi, pj);
      m.col(col) = c;
    }
    Point dr = Point::Zero(n);
    const double ca = std::cos(a);
    const double sa = std::sin(a);
    dr[pi] = -sa * yhat[pi] - ca * yhat[pj];
    dr[pj] = ca * yhat[pi] - sa * yhat[pj];
    m -= t * dr * yhat.transpose();
    return m;
  };
  return SphereMap(n, n, label, eval, SphereMap::JacFn(jac));
}

SphereMap perturbation_family(const SphereMap& base, const VectorField& field,
                              double eps) {
  const int n = base.dim_in();
  if (base.dim_out() != n) {
    throw Error(ErrorCode::invalid_argument,
                "perturbation base must map B^n into S^{n-1}");
  }
  if (!std::isfinite(eps)) {
    throw Error(ErrorCode::invalid_argument, "eps must be finite");
  }

  // eps sup|V| < 1 over a fixed sample of the closed ball.
  std::mt19937_64 rng(0x5eedf1e1dULL);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  double sup = 0.0;
  for (int k = 0; k < 1000; ++k) {
    Point d(n);
    for (int i = 0; i < n; ++i) d[i] = gauss(rng);
    const Point y = d.normalized() * std::pow(unif(rng), 1.0 / n);
    sup = std::max(sup, field.value(y).norm());
  }
  if (std::abs(eps) * sup >= 1.0) {
    throw Error(ErrorCode::invalid_argument,
                "perturbation too large: eps * sup|V| = " +
                    format_number(std::abs(eps) * sup) + " >= 1");
  }

  std::string label = "perturb:eps=" + format_number(eps) + ":field=" +
                      field.label + ":base=" + base.label();
  auto eval = [base, field, eps, label](const Point& y) -> Point {
    const double s = y.norm();
    const Point w = base.evaluate(y) + eps * (1.0 - s) * field.value(y);
    const double wn = w.norm();
    if (!(wn > kSingularRadius)) {
      throw Error(ErrorCode::degenerate_perturbation,
                  label + ": perturbed vector vanishes");
    }
    return w / wn;
  };
  std::optional<SphereMap::JacFn> jac;
  if (base.has_jacobian()) {
    jac = [base, field, eps, label, n](const Point& y) -> Matrix {
      const double s = checked_norm(y, label);
      const Point yhat = y / s;
      const Point v = field.value(y);
      const Point w = base.evaluate(y) + eps * (1.0 - s) * v;
      const double wn = w.norm();
      if (!(wn > kSingularRadius)) {
        throw Error(ErrorCode::degenerate_perturbation,
                    label + ": perturbed vector vanishes");
      }
      const Point u = w / wn;
      const Matrix dw = base.jacobian(y) +
                        eps * ((1.0 - s) * field.jacobian(y) -
                               v * yhat.transpose());
      return (Matrix::Identity(n, n) - u * u.transpose()) * dw / wn;
    };
  }
  return SphereMap(n, n, std::move(label), eval, jac);
}

SphereMap constant_map(int n, int axis) {
  require_dimension(n);
  if (axis < 0 || axis >= n) {
    throw Error(ErrorCode::invalid_argument, "constant map axis out of range");
  }
  auto eval = [n, axis](const Point&) -> Point {
    Point v = Point::Zero(n);
    v[axis] = 1.0;
    return v;
  };
  auto jac = [n](const Point&) -> Matrix { return Matrix::Zero(n, n); };
  return SphereMap(n, n, "constant:axis=" + std::to_string(axis), eval,
                   SphereMap::JacFn(jac));
}

double fd_step(const Point& x) { return 1e-5 * std::max(x.norm(), 0.1); }

Matrix fd_jacobian(const SphereMap& u, const Point& x, double h) {
  Matrix jac(u.dim_out(), u.dim_in());
  Point xp = x;
  Point xm = x;
  for (int i = 0; i < u.dim_in(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    jac.col(i) = (u.evaluate(xp) - u.evaluate(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return jac;
}

GradientNormSq gradient_norm_sq(const SphereMap& u, const Point& x) {
  const double r = x.norm();
  if (!(r > kSingularRadius)) {
    throw Error(ErrorCode::singular_point,
                u.label() + ": gradient requested at the singular origin");
  }
  if (r > 1.0 + 1e-12) {
    throw Error(ErrorCode::invalid_argument,
                u.label() + ": gradient requested outside the unit ball");
  }
  if (u.has_jacobian()) {
    return GradientNormSq{u.jacobian(x).squaredNorm()};
  }
  return GradientNormSq{fd_jacobian(u, x, fd_step(x)).squaredNorm()};
}

std::vector<SphereMap> library_maps(int n) {
  require_dimension(n);
  std::vector<SphereMap> maps;
  maps.push_back(radial_projection(n));
  maps.push_back(rotation_family(n, 0.5, {0, 1}));
  maps.push_back(
      perturbation_family(radial_projection(n), constant_field(n, n - 1), 0.1));
  maps.push_back(perturbation_family(rotation_family(n, 0.3, {0, 1}),
                                     swirl_field(n, 0, n - 1), 0.2));
  return maps;
}

}  // namespace pmin
