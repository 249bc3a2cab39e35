#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmin/core_maps.hpp"
#include "pmin/lifting.hpp"
#include "pmin/quadrature.hpp"

namespace pmin {

enum class CheckKind { identity, inequality };

const char* to_string(CheckKind kind) noexcept;
CheckKind check_kind_from_string(const std::string& name);

// One sub-check of a report. For identities margin = |lhs - rhs|, for
// inequalities margin = rhs - lhs; `holds` follows the report's rule.
// Steps with required = false are informational.
struct CheckStep {
  std::string name;
  CheckKind kind = CheckKind::identity;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double sigma = 0.0;
  double tolerance = 0.0;
  bool holds = false;
  bool required = true;
};

struct VerificationReport {
  std::string check_id;
  CheckKind kind = CheckKind::identity;
  // Base dimension n with (p, alpha) of the lifted functional; absent for
  // checks that only depend on n.
  std::optional<EnergyParams> params;
  int n = 0;
  std::string map_label;
  Estimate lhs;
  Estimate rhs;
  double margin = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::int64_t n_points = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  // Points rejected near singular sets and redrawn.
  std::int64_t resampled = 0;
  std::vector<CheckStep> steps;
  std::string note;

  const CheckStep* step(const std::string& name) const;
};

struct InequalityPolicy {
  // Pass when lhs <= rhs + sigmas * sigma_combined + bias + fp slack.
  double sigmas = 3.0;
  // Relative floating-point slack for inequalities that are equalities.
  double relative_slack = 1e-12;
  // Rerun borderline MC comparisons with the product rule.
  bool product_rerun = true;
  int rerun_radial_nodes = 32;
  std::int64_t rerun_directions = 4096;
};

// FD |grad ubar|^2 against 1/|x|^2 + |grad u(|x| phi(x))|^2 at uniform
// off-axis points of B^{n+1}; also the chain-rule jacobian when the base map
// is analytic.
VerificationReport verify_lemma1(const SphereMap& base, std::int64_t n_points,
                                 std::uint64_t seed, double fd_tolerance = 1e-4,
                                 double analytic_tolerance = 1e-8);

// Closed-form Jac(theta^{-1}) against the FD determinant, plus reciprocity,
// round trip and norm preservation, over random (slice, point) pairs.
VerificationReport verify_lemma2(int n, std::int64_t n_points,
                                 std::uint64_t seed, double tolerance = 1e-5);

// E^{n+1}_{p,alpha}(lift(u)) <= c1 int |x|^{alpha-p} + c2 E^n_{p,alpha+1}(u).
// params.n is the base dimension.
VerificationReport verify_lemma3(const SphereMap& base,
                                 const EnergyParams& params,
                                 const QuadratureSpec& spec,
                                 const InequalityPolicy& policy = {});

// max_{2 <= n <= n_max} |W_{n-1} Gamma((n+1)/2)/Gamma(n/2) - sqrt(pi)/2|.
VerificationReport verify_lemma4(int n_max, double tolerance = 1e-12);

// The inequality chain from the lifted radial energy through the bound to
// E^n_{p,alpha+1}(u) >= E^n_{p,alpha+1}(y/|y|), with `base` as the comparison
// map. The conclusion is only required when the premise
// E^{n+1}_{p,alpha}(x/|x|) <= E^{n+1}_{p,alpha}(lift(u)) holds numerically.
VerificationReport verify_theorem_chain(const SphereMap& base,
                                        const EnergyParams& params,
                                        const QuadratureSpec& spec,
                                        const InequalityPolicy& policy = {});

}  // namespace pmin
