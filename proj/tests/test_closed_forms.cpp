#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pmin/closed_forms.hpp"
#include "pmin/error.hpp"
#include "support/oracles.hpp"

using namespace pmin;

TEST_CASE("log gamma against reference values") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
  for (double x : {0.3, 1.5, 2.5, 7.25, 25.0, 151.5}) {
    CHECK(std::abs(log_gamma(x) - std::log(boost::math::tgamma(x))) <=
          1e-12 * std::max(1.0, std::abs(log_gamma(x))));
  }
  // log space keeps large arguments finite where Gamma itself overflows.
  CHECK(std::isfinite(log_gamma(400.0)));
  CHECK_THROWS_AS(log_gamma(0.0), Error);
  CHECK_THROWS_AS(log_gamma(-1.5), Error);
}

TEST_CASE("wallis integrals match quadrature") {
  CHECK(wallis(0).value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(wallis(1).value == 1.0);
  CHECK(wallis(2).value == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  for (int m = 0; m <= 30; ++m) {
    CAPTURE(m);
    CHECK(std::abs(wallis(m).value - oracle::wallis_quadrature(m)) < 1e-12);
  }
  CHECK_THROWS_AS(wallis(-1), Error);
}

TEST_CASE("lemma4 identity") {
  for (int n = 2; n <= 200; ++n) {
    CAPTURE(n);
    CHECK(std::abs(lemma4_identity(n) - std::sqrt(std::numbers::pi) / 2) < 1e-12);
  }
  CHECK_THROWS_AS(lemma4_identity(1), Error);
}

TEST_CASE("sphere measures") {
  CHECK(sphere_measure(1) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-15));
  CHECK(sphere_measure(2) == doctest::Approx(4 * std::numbers::pi).epsilon(1e-15));
  CHECK(sphere_measure(3) ==
        doctest::Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-15));
  for (int m = 1; m <= 40; ++m) {
    CHECK(sphere_measure(m) == doctest::Approx(oracle::sphere_area(m)).epsilon(1e-13));
  }
}

TEST_CASE("radial energy closed form") {
  const double e = radial_energy_closed_form(EnergyParams::make(3, 2.0, 0.0));
  CHECK(e == doctest::Approx(8 * std::numbers::pi).epsilon(1e-15));
  CHECK(std::abs(e - 25.132741) < 1e-6);
  CHECK(radial_energy_closed_form(EnergyParams::make(2, 1.0, 0.0)) ==
        doctest::Approx(2 * std::numbers::pi).epsilon(1e-15));
  CHECK(radial_energy_closed_form(EnergyParams::make(4, 2.0, 1.0)) ==
        doctest::Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-14));
  oracle::Gen g(17);
  for (int k = 0; k < 200; ++k) {
    const int n = g.integer(2, 9);
    const double a = g.uniform(0.0, 4.0);
    const double p = g.uniform(1.0, n + a - 0.05);
    CAPTURE(n);
    CAPTURE(p);
    CAPTURE(a);
    CHECK(radial_energy_closed_form(EnergyParams::make(n, p, a)) ==
          doctest::Approx(oracle::radial_energy(n, p, a)).epsilon(1e-9));
  }
  try {
    radial_energy_closed_form(EnergyParams::make(3, 3.0, 0.0));
    FAIL("expected divergence");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::divergent_energy);
  }
}

TEST_CASE("ball power integral") {
  CHECK(ball_power_integral(3, 0.0) == doctest::Approx(4 * std::numbers::pi / 3).epsilon(1e-15));
  CHECK(ball_power_integral(3, -2.0) == doctest::Approx(4 * std::numbers::pi).epsilon(1e-15));
  try {
    ball_power_integral(3, -3.0);
    FAIL("expected non-integrable");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::non_integrable);
  }
}

TEST_CASE("lift bound constants") {
  const auto c = lemma3_rhs_constants(2, 2.0);
  CHECK(c.c1 == 1.0);
  CHECK(c.c2 == doctest::Approx(2.0 * wallis(1).value).epsilon(1e-15));
  const auto d = lemma3_rhs_constants(4, 3.0);
  CHECK(d.c1 == doctest::Approx(std::pow(4.0, 0.5)).epsilon(1e-15));
  CHECK(d.c2 == doctest::Approx(2.0 * std::pow(0.75, -0.5) * wallis(3).value).epsilon(1e-15));
}

TEST_CASE("property: convexity split sign follows p") {
  oracle::Gen g(23);
  for (int k = 0; k < 5000; ++k) {
    const int n = g.integer(2, 8);
    const double a = g.uniform(1e-3, 1e3);
    const double b = g.uniform(0.0, 1e3);
    const double scale = std::pow(a + b, 1.5);
    const double p_hi = g.uniform(2.0, 6.0);
    const double p_lo = g.uniform(1.0, 2.0);
    CHECK(convexity_split_residual(n, p_hi, a, b) >= -1e-12 * std::pow(a + b, p_hi / 2));
    CHECK(convexity_split_residual(n, p_lo, a, b) <= 1e-12 * scale);
  }
  // p = 2 is the exact split.
  CHECK(std::abs(convexity_split_residual(3, 2.0, 4.0, 9.0)) < 1e-12);
}
