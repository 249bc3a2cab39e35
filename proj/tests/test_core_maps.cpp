#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pmin/core_maps.hpp"
#include "pmin/error.hpp"
#include "pmin/quadrature.hpp"
#include "support/oracles.hpp"

using namespace pmin;

namespace {

Point pt(std::initializer_list<double> v) {
  Point x(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected pmin::Error");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("energy params validate their ranges") {
  CHECK_NOTHROW(EnergyParams::make(2, 1.0, 0.0));
  CHECK(code_of([] { EnergyParams::make(1, 2.0, 0.0); }) ==
        ErrorCode::invalid_dimension);
  CHECK(code_of([] { EnergyParams::make(3, 0.5, 0.0); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([] { EnergyParams::make(3, 2.0, -0.1); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([] { EnergyParams::make(3, std::nan(""), 0.0); }) ==
        ErrorCode::invalid_argument);
  CHECK(EnergyParams::make(3, 3.4, 0.5).sobolev_ok());
  CHECK_FALSE(EnergyParams::make(3, 3.5, 0.5).sobolev_ok());
}

TEST_CASE("radial projection values and gradient") {
  const auto u3 = radial_projection(3);
  const Point x = pt({0.5, 0, 0});
  CHECK((u3.evaluate(x) - pt({1, 0, 0})).norm() < 1e-15);
  CHECK(gradient_norm_sq(u3, x).value == doctest::Approx(8.0).epsilon(1e-14));

  const auto u2 = radial_projection(2);
  CHECK((u2.evaluate(pt({0.3, 0.4})) - pt({0.6, 0.8})).norm() < 1e-15);

  const auto u5 = radial_projection(5);
  const Point y = 0.25 * oracle::Gen(7).direction(5);
  CHECK(gradient_norm_sq(u5, y).value == doctest::Approx(64.0).epsilon(1e-12));

  const auto u4 = radial_projection(4);
  const Point z = 0.5 * oracle::Gen(11).direction(4);
  CHECK(gradient_norm_sq(u4, z).value == doctest::Approx(12.0).epsilon(1e-12));
  const double fd = fd_jacobian(u4, z, 1e-5).squaredNorm();
  CHECK(fd == doctest::Approx(12.0).epsilon(1e-8));
}

TEST_CASE("radial projection errors") {
  CHECK(code_of([] { radial_projection(1); }) == ErrorCode::invalid_dimension);
  const auto u = radial_projection(3);
  CHECK(code_of([&] { u.evaluate(Point::Zero(3)); }) == ErrorCode::singular_point);
  CHECK(code_of([&] { gradient_norm_sq(u, pt({1e-10, 0, 0})); }) ==
        ErrorCode::singular_point);
  CHECK(code_of([&] { u.evaluate(pt({0.5, 0.1})); }) ==
        ErrorCode::invalid_dimension);
}

TEST_CASE("rotation family examples") {
  oracle::Gen g(3);
  for (int n = 2; n <= 6; ++n) {
    const auto r0 = rotation_family(n, 0.0);
    const auto u0 = radial_projection(n);
    for (int k = 0; k < 50; ++k) {
      const Point x = g.ball_point(n);
      CHECK((r0.evaluate(x) - u0.evaluate(x)).norm() <= 1e-15);
    }
  }
  const auto r = rotation_family(2, std::numbers::pi);
  CHECK((r.evaluate(pt({0.5, 0})) - pt({0, 1})).norm() < 1e-15);

  const auto r3 = rotation_family(3, 0.7);
  CHECK((r3.evaluate(pt({0, 0, 1})) - pt({0, 0, 1})).norm() < 1e-15);

  CHECK(code_of([] { rotation_family(3, 0.5, {1, 1}); }) ==
        ErrorCode::invalid_plane);
  CHECK(code_of([] { rotation_family(3, 0.5, {0, 3}); }) ==
        ErrorCode::invalid_plane);
}

TEST_CASE("rotation family analytic gradient matches finite differences") {
  const auto r = rotation_family(3, 0.5);
  oracle::Gen g(5);
  for (int k = 0; k < 20; ++k) {
    const Point x = g.ball_point(3, 0.1, 0.95);
    const double a = gradient_norm_sq(r, x).value;
    const double fd = oracle::fd4_grad_sq(
        [](const Point& y) { return oracle::rotation(y, 0.5); }, x);
    CHECK(std::abs(a - fd) / a < 1e-6);
  }
}

TEST_CASE("perturbation family examples and errors") {
  const auto base = radial_projection(3);
  const auto p0 = perturbation_family(base, constant_field(3, 2), 0.0);
  oracle::Gen g(9);
  for (int k = 0; k < 50; ++k) {
    const Point x = g.ball_point(3);
    CHECK((p0.evaluate(x) - base.evaluate(x)).norm() < 1e-15);
  }
  const auto p = perturbation_family(base, constant_field(3, 2), 0.1);
  const Point want = pt({1, 0, 0.05}) / std::sqrt(1.0025);
  CHECK((p.evaluate(pt({0.5, 0, 0})) - want).norm() < 1e-15);

  CHECK(code_of([&] { perturbation_family(base, constant_field(3, 2), 1.5); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([] { constant_field(3, 3); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { swirl_field(3, 1, 1); }) == ErrorCode::invalid_plane);

  // A field that is zero on the sup-check sample but cancels the base at one
  // point.
  VectorField cancel{"cancel", [](const Point& y) {
                       Point v = Point::Zero(3);
                       if (std::abs(y[0] - 0.5) < 1e-12 && y.tail(2).norm() == 0)
                         v[0] = -2.0;
                       return v;
                     },
                     [](const Point&) { return Matrix::Zero(3, 3); }};
  const auto bad = perturbation_family(base, cancel, 1.0);
  CHECK(code_of([&] { bad.evaluate(pt({0.5, 0, 0})); }) ==
        ErrorCode::degenerate_perturbation);
}

TEST_CASE("property: library maps are unit, tangent and boundary fixing") {
  for (int n = 2; n <= 5; ++n) {
    oracle::Gen g(100 + n);
    for (const auto& u : library_maps(n)) {
      CAPTURE(u.label());
      double worst_unit = 0.0, worst_tangent = 0.0, worst_boundary = 0.0;
      double worst_fd = 0.0;
      for (int k = 0; k < 10000; ++k) {
        const Point x = g.ball_point(n, 1e-6, 1.0 - 1e-9);
        const Point v = u.evaluate(x);
        worst_unit = std::max(worst_unit, std::abs(v.norm() - 1.0));
        if (u.has_jacobian()) {
          const Matrix J = u.jacobian(x);
          worst_tangent = std::max(worst_tangent, (J.transpose() * v).cwiseAbs().maxCoeff());
        }
      }
      for (int k = 0; k < 1000; ++k) {
        const Point b = g.direction(n);
        worst_boundary = std::max(worst_boundary, (u.evaluate(b) - b).norm());
      }
      for (int k = 0; k < 200; ++k) {
        const Point x = g.ball_point(n, 0.1, 0.95);
        const Matrix J = u.jacobian(x);
        const Matrix F = fd_jacobian(u, x, fd_step(x));
        worst_fd = std::max(worst_fd, (J - F).norm() / J.norm());
      }
      CHECK(worst_unit < 1e-10);
      CHECK(worst_tangent < 1e-8);
      CHECK(worst_boundary < 1e-9);
      CHECK(worst_fd < 1e-5);
    }
  }
}

TEST_CASE("gradient norm falls back to finite differences") {
  const auto u = rotation_family(4, 0.4).without_jacobian();
  CHECK_FALSE(u.has_jacobian());
  CHECK(code_of([&] { u.jacobian(Point::Constant(4, 0.2)); }) ==
        ErrorCode::invalid_argument);
  const Point x = Point::Constant(4, 0.2);
  const double fd = gradient_norm_sq(u, x).value;
  const double exact = gradient_norm_sq(rotation_family(4, 0.4), x).value;
  CHECK(std::abs(fd - exact) / exact < 1e-8);
  CHECK(fd_step(x) == doctest::Approx(1e-5 * 0.4));
  CHECK(fd_step(pt({0.01, 0, 0, 0})) == doctest::Approx(1e-6));
  CHECK(code_of([&] { gradient_norm_sq(u, Point::Constant(4, 0.6)); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("constant map has zero gradient") {
  const auto c = constant_map(3, 1);
  CHECK(gradient_norm_sq(c, pt({0.2, 0.3, 0.1})).value == 0.0);
}

TEST_CASE("perturbations do not beat the base in a minimizing regime") {
  // (3, 2, 0) is a known minimizer region; paired samples keep the noise low.
  const auto params = EnergyParams::make(3, 2.0, 0.0);
  QuadratureSpec spec;
  spec.samples = 20000;
  const auto ref = energy_samples(radial_projection(3), params, spec);
  for (double eps : {-0.1, -0.05, 0.05, 0.1}) {
    const auto u = perturbation_family(radial_projection(3), constant_field(3, 2), eps);
    const auto vals = energy_samples(u, params, spec);
    std::vector<double> d(vals.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = vals[i] - ref[i];
    const auto est = estimate_from_values(d, BallSampler(3, -2.0, spec).mass());
    CAPTURE(eps);
    CHECK(est.value >= -3.0 * est.std_error);
  }
}

TEST_CASE("map labels round trip") {
  for (int n = 2; n <= 5; ++n) {
    oracle::Gen g(40 + n);
    for (const auto& u : library_maps(n)) {
      const auto back = map_from_label(u.label(), n);
      CHECK(back.label() == u.label());
      for (int k = 0; k < 20; ++k) {
        const Point x = g.ball_point(n);
        CHECK((back.evaluate(x) - u.evaluate(x)).norm() == 0.0);
      }
    }
  }
  CHECK(map_from_label("rotation:t=0.5", 3).label() == "rotation:t=0.5:plane=0,1");
  CHECK(code_of([] { map_from_label("spiral", 3); }) == ErrorCode::unknown_label);
  CHECK(code_of([] { map_from_label("rotation:t=abc", 3); }) ==
        ErrorCode::unknown_label);
  CHECK(code_of([] { map_from_label("perturb:field=wave", 3); }) ==
        ErrorCode::unknown_label);
}
