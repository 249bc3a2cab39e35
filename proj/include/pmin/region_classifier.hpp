#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pmin/core_maps.hpp"

namespace pmin {

enum class RegionStatus { minimizer_known, unknown, not_in_sobolev };

const char* to_string(RegionStatus status) noexcept;
RegionStatus region_status_from_string(const std::string& name);

// Tags: "Cor1.i", "Cor1.ii", "Cor1.iii", "base:CoronGulliver",
// "base:HardtLin", "base:HongWang", "base:weighted-integer-p",
// "induction-derived".
struct RegionVerdict {
  EnergyParams params;
  RegionStatus status = RegionStatus::unknown;
  std::vector<std::string> cases;
  // Parameter triples from a base fact down to params, each step lowering
  // n by one and raising alpha by one. Empty when no derivation exists.
  std::vector<EnergyParams> derivation;
  // Base fact at the head of the derivation.
  std::string derivation_base;
  // Cor1.ii is tested with beta = alpha, the weakest admissible choice.
  std::optional<double> beta;
  // p lies within 1e-12 of the n + alpha - 2 sqrt(n + alpha - 1) boundary.
  bool guard_band = false;

  bool has_case(const std::string& tag) const;
};

// Known-minimizer facts used as induction seeds.
class FactBase {
 public:
  using Matcher = std::function<std::optional<std::string>(const EnergyParams&)>;

  explicit FactBase(Matcher matcher) : matcher_(std::move(matcher)) {}

  // Results for the unweighted and integer-p weighted energies:
  // Coron-Gulliver (alpha = 0, n >= 3, integer p <= n-1), Hardt-Lin
  // (alpha = 0, p in (n-1, n)), Hong/Wang (alpha = 0, n >= 7,
  // p <= n - 2 sqrt(n-1)), and integer p <= n-1 for every alpha >= 0.
  static FactBase published();

  // An explicit finite set of triples, matched to 1e-12, tagged "fact".
  static FactBase from_triples(std::vector<EnergyParams> triples);

  std::optional<std::string> match(const EnergyParams& params) const {
    return matcher_(params);
  }

 private:
  Matcher matcher_;
};

struct Derivation {
  // [(n+k, p, alpha-k), ..., (n, p, alpha)]
  std::vector<EnergyParams> chain;
  std::string base_tag;
};

// Smallest k >= min_steps with (n+k, p, alpha-k) a fact and alpha - k >= 0.
std::optional<Derivation> induction_closure(const FactBase& facts,
                                            const EnergyParams& target,
                                            int min_steps = 0);

RegionVerdict classify(const EnergyParams& params);

// Chain replays: each step is (n-1, p, alpha+1) of the previous one and the
// head is matched by `facts`.
bool replay_derivation(const FactBase& facts, const Derivation& derivation);

}  // namespace pmin
