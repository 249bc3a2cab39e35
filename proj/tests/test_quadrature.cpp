#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pmin/closed_forms.hpp"
#include "pmin/error.hpp"
#include "pmin/quadrature.hpp"
#include "support/oracles.hpp"

using namespace pmin;

namespace {

QuadratureSpec mc(std::int64_t samples, std::uint64_t seed = 1) {
  QuadratureSpec s;
  s.samples = samples;
  s.seed = seed;
  return s;
}

QuadratureSpec product(std::int64_t directions, int nodes) {
  QuadratureSpec s;
  s.method = QuadratureMethod::radial_product;
  s.samples = directions;
  s.radial_nodes = nodes;
  return s;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_NOTHROW(QuadratureSpec{}.validate());
  auto s = mc(99);
  CHECK_THROWS_AS(s.validate(), Error);
  s = mc(1000);
  s.r_min = 0.01;
  CHECK_THROWS_AS(s.validate(), Error);
  s.r_min = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = product(1000, 7);
  CHECK_THROWS_AS(s.validate(), Error);
  s = mc(1000);
  s.workers = 0;
  CHECK_THROWS_AS(s.validate(), Error);
  CHECK(quadrature_method_from_string("mc") == QuadratureMethod::monte_carlo);
  CHECK(quadrature_method_from_string("product") == QuadratureMethod::radial_product);
  CHECK_THROWS_AS(quadrature_method_from_string("qmc"), Error);
}

TEST_CASE("ball volume and inverse-square integral") {
  const auto vol = integrate_ball(3, 0.0, mc(100000), [](const Point&) { return 1.0; });
  const double want = 4 * std::numbers::pi / 3;
  // constant integrand: the only error is the excluded core |x| < r_min
  CHECK(std::abs(vol.value - want) <= 3 * vol.std_error + 1e-12);
  const auto inv = integrate_ball(3, -2.0, mc(100000), [](const Point&) { return 1.0; });
  CHECK(std::abs(inv.value - 4 * std::numbers::pi) <=
        3 * inv.std_error + 4 * std::numbers::pi * 1e-6 + 1e-12);

  // a non-constant integrand exercises the statistical error
  const auto x2 = integrate_ball(3, 0.0, mc(100000),
                                 [](const Point& x) { return x.squaredNorm(); });
  const double want2 = 4 * std::numbers::pi / 5;
  CHECK(x2.std_error > 0.0);
  CHECK(std::abs(x2.value - want2) <= 3 * x2.std_error);
}

TEST_CASE("sampler errors and determinism") {
  try {
    BallSampler(3, -3.0, mc(1000));
    FAIL("expected non-integrable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_integrable);
  }
  CHECK_NOTHROW(BallSampler(3, -3.0, mc(1000), true));

  const BallSampler a(4, -1.5, mc(5000, 42));
  const BallSampler b(4, -1.5, mc(5000, 42));
  const auto pa = a.draw();
  const auto pb = b.draw();
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) CHECK((pa[i] - pb[i]).norm() == 0.0);
  const auto pc = BallSampler(4, -1.5, mc(5000, 43)).draw();
  CHECK((pa[0] - pc[0]).norm() > 0.0);
  for (const auto& x : pa) {
    CHECK(x.norm() < 1.0);
    CHECK(x.norm() >= 1e-6);
  }
}

TEST_CASE("worker blocks partition the sample stream deterministically") {
  auto spec = mc(10001, 5);
  spec.workers = 3;
  const BallSampler s(3, 0.0, spec);
  CHECK(s.blocks() == 3);
  std::int64_t total = 0;
  for (int b = 0; b < 3; ++b) {
    CHECK(s.block_begin(b) == total);
    total += static_cast<std::int64_t>(s.block(b).size());
  }
  CHECK(total == 10001);
  const auto f = [](const Point& x) { return x[0] * x[0] + x[1]; };
  const auto e1 = integrate_ball(3, 0.0, spec, f);
  const auto e2 = integrate_ball(3, 0.0, spec, f);
  CHECK(e1.value == e2.value);
  CHECK(e1.std_error == e2.std_error);
  CHECK(std::abs(e1.value - 4 * std::numbers::pi / 15) <= 3 * e1.std_error);
}

TEST_CASE("property: unbiased for radial polynomials") {
  // int_{B^n} |x|^k |x|^beta = |S^{n-1}| / (n + beta + k)
  oracle::Gen g(31);
  int inside = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const int n = g.integer(2, 6);
    const double beta = g.uniform(-n + 0.5, 2.0);
    const int k = g.integer(1, 4);
    const auto est = integrate_ball(n, beta, mc(2000, g.bits()),
                                    [k](const Point& x) { return std::pow(x.norm(), k); });
    const double want = oracle::sphere_area(n - 1) / (n + beta + k);
    if (std::abs(est.value - want) <= 4 * est.std_error + 1e-9) ++inside;
  }
  CHECK(inside >= 99);
}

TEST_CASE("sigma scales as one over root samples") {
  const auto f = [](const Point& x) { return x[0] * x[0]; };
  const auto e1 = integrate_ball(3, 0.0, mc(20000, 3), f);
  const auto e4 = integrate_ball(3, 0.0, mc(80000, 3), f);
  const double ratio = e1.std_error / e4.std_error;
  CHECK(ratio > 2.0 * 0.7);
  CHECK(ratio < 2.0 * 1.3);
}

TEST_CASE("energy of built-in maps") {
  const auto e = energy(radial_projection(3), EnergyParams::make(3, 2.0, 0.0), mc(1000000));
  CHECK(std::abs(e.value - 8 * std::numbers::pi) / (8 * std::numbers::pi) < 0.005);
  REQUIRE(e.bias_bound.has_value());
  CHECK(*e.bias_bound > 0.0);
  CHECK(std::abs(e.value - 8 * std::numbers::pi) <= 3 * e.std_error + *e.bias_bound + 1e-12);

  const auto e2 = energy(radial_projection(2), EnergyParams::make(2, 1.0, 0.0), mc(100000));
  CHECK(std::abs(e2.value - 2 * std::numbers::pi) <= 3 * e2.std_error + *e2.bias_bound + 1e-12);

  const auto zero = energy(constant_map(3), EnergyParams::make(3, 2.0, 0.0), mc(1000));
  CHECK(zero.value == 0.0);

  try {
    energy(radial_projection(3), EnergyParams::make(3, 3.0, 0.0), mc(1000));
    FAIL("expected divergence");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::divergent_energy);
  }
  const auto forced = energy(radial_projection(3), EnergyParams::make(3, 3.0, 0.0),
                             mc(1000), EnergyOptions{true});
  CHECK(std::isfinite(forced.value));
  CHECK(forced.value > 8 * std::numbers::pi);
}

TEST_CASE("gauss-jacobi radial rule") {
  for (double gamma : {0.0, 1.0, -0.5, 2.3}) {
    const auto rule = gauss_jacobi_radial(12, gamma);
    REQUIRE(rule.nodes.size() == 12);
    for (int k = 0; k <= 23; ++k) {
      double q = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        q += rule.weights[i] * std::pow(rule.nodes[i], k);
      }
      CAPTURE(gamma);
      CAPTURE(k);
      CHECK(q == doctest::Approx(1.0 / (k + gamma + 1.0)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(gauss_jacobi_radial(8, -1.0), Error);
}

TEST_CASE("product rule examples") {
  const auto e = radial_product_energy(radial_projection(3), EnergyParams::make(3, 2.0, 0.0),
                                       product(2048, 64));
  CHECK(std::abs(e.value - 8 * std::numbers::pi) / (8 * std::numbers::pi) < 0.002);
  const auto f = energy(radial_projection(4), EnergyParams::make(4, 2.0, 1.0), product(2048, 32));
  CHECK(f.value == doctest::Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-10));

  // doubling nodes does not increase the discretization estimate on a smooth map
  const auto u = rotation_family(3, 0.4);
  const auto params = EnergyParams::make(3, 2.0, 0.0);
  const auto k16 = radial_product_energy(u, params, product(512, 16));
  const auto k32 = radial_product_energy(u, params, product(512, 32));
  CHECK(k32.std_error <= k16.std_error * 1.0 + 1e-15);
}

TEST_CASE("property: MC and product rule agree on every built-in map") {
  for (int n = 2; n <= 5; ++n) {
    const auto params = EnergyParams::make(n, 2.0, 0.5);
    for (const auto& u : library_maps(n)) {
      CAPTURE(u.label());
      const auto a = energy(u, params, mc(40000, 7));
      const auto b = energy(u, params, product(4096, 24));
      const double tol = 3 * std::hypot(a.std_error, b.std_error) +
                         a.bias_bound.value_or(0.0) + 1e-12 * std::abs(b.value);
      CHECK(std::abs(a.value - b.value) <= tol);
    }
  }
}

TEST_CASE("seed determinism of energy estimates") {
  const auto u = perturbation_family(rotation_family(3, 0.3), swirl_field(3, 0, 2), 0.2);
  const auto params = EnergyParams::make(3, 2.5, 1.0);
  const auto a = energy(u, params, mc(5000, 99));
  const auto b = energy(u, params, mc(5000, 99));
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  CHECK(a.n_eval == 5000);
}
