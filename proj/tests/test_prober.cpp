#include <cmath>
#include <vector>

#include "doctest.h"
#include "pmin/closed_forms.hpp"
#include "pmin/error.hpp"
#include "pmin/prober.hpp"

using namespace pmin;

namespace {

QuadratureSpec mc(std::int64_t samples, std::uint64_t seed = 1) {
  QuadratureSpec s;
  s.samples = samples;
  s.seed = seed;
  return s;
}

FamilySpec rotation() { return family_from_string("rotation"); }

}  // namespace

TEST_CASE("linear grid") {
  const auto g = linear_grid(-1, 1, 21);
  REQUIRE(g.size() == 21);
  CHECK(g.front() == -1.0);
  CHECK(g.back() == 1.0);
  CHECK(g[10] == 0.0);
  CHECK(g[6] == -0.4);
  CHECK_THROWS_AS(linear_grid(0, 1, 1), Error);
  CHECK_THROWS_AS(linear_grid(1, 0, 5), Error);
}

TEST_CASE("family parsing and members") {
  CHECK(family_from_string("rotation").kind == FamilyKind::rotation);
  CHECK(family_from_string("perturbation").kind == FamilyKind::perturbation);
  CHECK_THROWS_AS(family_from_string("twist"), Error);
  CHECK(rotation().symmetric());
  const auto m = family_member(3, rotation(), 0.0);
  Point x(3);
  x << 0.2, -0.3, 0.1;
  CHECK((m.evaluate(x) - radial_projection(3).evaluate(x)).norm() < 1e-15);
  FamilySpec pert = family_from_string("perturbation");
  const auto p0 = family_member(3, pert, 0.0);
  CHECK((p0.evaluate(x) - radial_projection(3).evaluate(x)).norm() < 1e-15);
}

TEST_CASE("probe of a minimizing triple") {
  const auto params = EnergyParams::make(3, 2.0, 0.0);
  const auto grid = linear_grid(-1, 1, 21);
  const auto res = probe_family(params, rotation(), grid, mc(20000));
  CHECK(res.energies.size() == grid.size());
  CHECK(res.reference_energy == radial_energy_closed_form(params));
  CHECK(res.empirical_only);
  CHECK(res.concordant);
  CHECK(res.argmin == 0.0);
  CHECK(res.min_margin >= -3 * res.min_margin_sigma);
  REQUIRE(res.second_variation.has_value());
  CHECK(res.second_variation->value >= -3 * res.second_variation->std_error);
  // rotation family is even in t
  CHECK(std::abs(res.second_variation->first_difference) <=
        3 * res.second_variation->first_difference_error + 1e-9);
  for (const auto& g : res.energies) {
    if (g.parameter == 0.0) {
      CHECK(std::abs(g.energy.value - res.reference_energy) <=
            3 * g.energy.std_error + 1e-4 * res.reference_energy);
    }
  }
}

TEST_CASE("family consistency at t = 0") {
  for (const auto& [n, p, a] : {std::tuple{2, 1.0, 0.0}, std::tuple{3, 2.5, 0.5},
                                std::tuple{4, 3.0, 1.0}}) {
    const auto params = EnergyParams::make(n, p, a);
    for (const char* fam : {"rotation", "perturbation"}) {
      const auto res = probe_family(params, family_from_string(fam), {-0.1, 0.0, 0.1},
                                    mc(5000), ProbeOptions{3.0, 0.05, false});
      const auto& mid = res.energies[1];
      CAPTURE(fam);
      CHECK(std::abs(mid.energy.value - res.reference_energy) <=
            3 * mid.energy.std_error + 1e-4 * res.reference_energy);
      CHECK(std::abs(mid.difference.value) <= 1e-12 * res.reference_energy);
    }
  }
}

TEST_CASE("common random numbers reduce the variance of differences") {
  const auto params = EnergyParams::make(3, 2.0, 0.0);
  const auto u1 = family_member(3, rotation(), 0.5);
  const auto u2 = family_member(3, rotation(), 0.45);
  const auto a = energy_samples(u1, params, mc(20000, 3));
  const auto b_shared = energy_samples(u2, params, mc(20000, 3));
  const auto b_indep = energy_samples(u2, params, mc(20000, 4));
  auto variance = [](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    m /= v.size();
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
  };
  std::vector<double> diff(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) diff[k] = a[k] - b_shared[k];
  const double var_paired = variance(diff);
  const double var_indep = variance(a) + variance(b_indep);
  CHECK(var_paired < 0.1 * var_indep);

  // the probe's difference error never exceeds the independent combination
  const auto res = probe_family(params, rotation(), {0.0, 0.5}, mc(20000, 3),
                                ProbeOptions{3.0, 0.05, false});
  const auto& g = res.energies[1];
  CHECK(g.difference.std_error <=
        std::hypot(g.energy.std_error, res.energies[0].energy.std_error) * (1 + 1e-9));
}

TEST_CASE("second variation reported with error bar") {
  const auto sv = second_variation(EnergyParams::make(4, 3.0, 1.0), rotation(), mc(20000));
  CHECK(sv.h == 0.05);
  CHECK(std::isfinite(sv.value));
  CHECK(sv.std_error >= 0.0);
  CHECK_THROWS_AS(second_variation(EnergyParams::make(4, 3.0, 1.0), rotation(), mc(1000), 0.0),
                  Error);
}

TEST_CASE("probe errors") {
  try {
    probe_family(EnergyParams::make(2, 2.0, 0.0), rotation(), {0.0, 0.5}, mc(1000));
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::divergent_energy);
  }
  CHECK_THROWS_AS(probe_family(EnergyParams::make(3, 2.0, 0.0), rotation(), {0.1, 0.5}, mc(1000)),
                  Error);
}

TEST_CASE("golden-section refinement stays near the minimum") {
  ProbeOptions o;
  o.second_variation = false;
  o.refine = true;
  const auto res = probe_family(EnergyParams::make(3, 2.0, 0.0), rotation(),
                                linear_grid(-1, 1, 11), mc(5000), o);
  REQUIRE(res.refinement.has_value());
  CHECK(std::abs(res.refinement->parameter) <= 0.2);
  CHECK(res.refinement->difference.value >= -3 * res.refinement->difference.std_error - 1e-12);
  CHECK(res.refinement->evaluations > 2);
}
