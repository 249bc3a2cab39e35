#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pmin/error.hpp"

namespace pmin {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Evaluation closer than this to a map's singular set raises instead of
// returning NaN.
inline constexpr double kSingularRadius = 1e-9;

// Parameters (n, p, alpha) of the functional
//   E^n_{p,alpha}(u) = int_{B^n} |x|^alpha |grad u|^p dx.
struct EnergyParams {
  int n = 2;
  double p = 1.0;
  double alpha = 0.0;

  // Validates n >= 2, p >= 1, alpha >= 0.
  static EnergyParams make(int n, double p, double alpha);

  // x/|x| has finite energy iff p < n + alpha.
  bool sobolev_ok() const { return p < static_cast<double>(n) + alpha; }

  friend bool operator==(const EnergyParams&, const EnergyParams&) = default;
};

// Squared Frobenius norm of du, sum_i |du . e_i|^2.
struct GradientNormSq {
  double value = 0.0;
};

// A map from the unit ball of R^dim_in into the unit sphere S^{dim_out - 1}.
// Evaluation is pure; copies share the underlying closures.
class SphereMap {
 public:
  using EvalFn = std::function<Point(const Point&)>;
  using JacFn = std::function<Matrix(const Point&)>;

  SphereMap(int dim_in, int dim_out, std::string label, EvalFn evaluate,
            std::optional<JacFn> jacobian = std::nullopt);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const std::string& label() const { return label_; }

  Point evaluate(const Point& x) const;

  bool has_jacobian() const { return jacobian_.has_value(); }
  // Rows are output components, columns are input directions.
  Matrix jacobian(const Point& x) const;

  // Same map with the analytic jacobian dropped, forcing finite differences.
  SphereMap without_jacobian() const;

 private:
  void check_input(const Point& x) const;

  int dim_in_;
  int dim_out_;
  std::string label_;
  EvalFn evaluate_;
  std::optional<JacFn> jacobian_;
};

// A smooth vector field on R^n used to build perturbations.
struct VectorField {
  std::string label;
  std::function<Point(const Point&)> value;
  std::function<Matrix(const Point&)> jacobian;
};

// V(y) = e_axis.
VectorField constant_field(int n, int axis);
// V(y) = -y_j e_i + y_i e_j, a rotation generator in the (i, j) plane.
VectorField swirl_field(int n, int i, int j);

// x -> x/|x|, with jacobian (I - x^ x^T)/|x|.
SphereMap radial_projection(int n);

// y -> R(t (1 - |y|)) y/|y|, R rotating the coordinate plane (plane.first,
// plane.second). Fixes the boundary sphere; t = 0 is the radial projection.
SphereMap rotation_family(int n, double t, std::pair<int, int> plane = {0, 1});

// y -> normalize(base(y) + eps (1 - |y|) V(y)). Requires eps sup|V| < 1,
// checked on a fixed sample of the ball.
SphereMap perturbation_family(const SphereMap& base, const VectorField& field,
                              double eps);

// u = e_axis everywhere. Does not satisfy the boundary condition; only used to
// exercise zero-gradient code paths.
SphereMap constant_map(int n, int axis = 0);

// Finite-difference step used when a map has no analytic jacobian.
double fd_step(const Point& x);

// Central-difference jacobian of u at x with step h.
Matrix fd_jacobian(const SphereMap& u, const Point& x, double h);

// Uses the analytic jacobian when present, central differences otherwise.
GradientNormSq gradient_norm_sq(const SphereMap& u, const Point& x);

// The family of built-in maps on B^n used by the verification sweeps:
// radial, a rotation and two perturbations.
std::vector<SphereMap> library_maps(int n);

// Builds a map on B^n from a label such as "radial",
// "rotation:t=0.5:plane=0,1" or "perturb:eps=0.1:field=const:axis=2".
// Labels produced by SphereMap::label() parse back to the same map.
SphereMap map_from_label(const std::string& label, int n);

}  // namespace pmin
