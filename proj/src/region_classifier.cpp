#include "pmin/region_classifier.hpp"

#include <algorithm>
#include <cmath>

namespace pmin {

namespace {

constexpr double kGuardBand = 1e-12;

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

// p <= m - 2 sqrt(m - 1), boundary included. Sets guard when p is within
// the floating-point guard band of the boundary.
bool below_hong_wang_bound(double m, double p, bool& guard) {
  const double bound = m - 2.0 * std::sqrt(m - 1.0);
  if (std::abs(p - bound) < kGuardBand) {
    guard = true;
    return true;
  }
  return p <= bound;
}

std::optional<std::string> published_fact(const EnergyParams& t, bool& guard) {
  const double n = t.n;
  if (t.alpha == 0.0) {
    if (t.n >= 3 && is_integer(t.p) && t.p >= 1.0 && t.p <= n - 1.0) {
      return "base:CoronGulliver";
    }
    if (t.p > n - 1.0 && t.p < n) return "base:HardtLin";
    if (t.n >= 7 && t.p >= 1.0 && below_hong_wang_bound(n, t.p, guard)) {
      return "base:HongWang";
    }
  }
  if (is_integer(t.p) && t.p >= 1.0 && t.p <= n - 1.0) {
    return "base:weighted-integer-p";
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(RegionStatus status) noexcept {
  switch (status) {
    case RegionStatus::minimizer_known: return "minimizer_known";
    case RegionStatus::unknown: return "unknown";
    case RegionStatus::not_in_sobolev: return "not_in_sobolev";
  }
  return "unknown";
}

RegionStatus region_status_from_string(const std::string& name) {
  if (name == "minimizer_known") return RegionStatus::minimizer_known;
  if (name == "unknown") return RegionStatus::unknown;
  if (name == "not_in_sobolev") return RegionStatus::not_in_sobolev;
  throw Error(ErrorCode::invalid_argument, "unknown region status '" + name + "'");
}

bool RegionVerdict::has_case(const std::string& tag) const {
  return std::find(cases.begin(), cases.end(), tag) != cases.end();
}

FactBase FactBase::published() {
  return FactBase([](const EnergyParams& t) {
    bool guard = false;
    return published_fact(t, guard);
  });
}

FactBase FactBase::from_triples(std::vector<EnergyParams> triples) {
  return FactBase([triples = std::move(triples)](const EnergyParams& t)
                      -> std::optional<std::string> {
    for (const auto& f : triples) {
      if (f.n == t.n && std::abs(f.p - t.p) <= 1e-12 &&
          std::abs(f.alpha - t.alpha) <= 1e-12) {
        return "fact";
      }
    }
    return std::nullopt;
  });
}

std::optional<Derivation> induction_closure(const FactBase& facts,
                                            const EnergyParams& target,
                                            int min_steps) {
  if (target.alpha < 0.0) {
    throw Error(ErrorCode::invalid_argument, "induction needs alpha >= 0");
  }
  const int max_steps = static_cast<int>(std::floor(target.alpha));
  for (int k = std::max(min_steps, 0); k <= max_steps; ++k) {
    const EnergyParams seed{target.n + k, target.p, target.alpha - k};
    if (auto tag = facts.match(seed)) {
      Derivation d;
      d.base_tag = *tag;
      for (int j = k; j >= 0; --j) {
        d.chain.push_back(EnergyParams{target.n + j, target.p, target.alpha - j});
      }
      return d;
    }
  }
  return std::nullopt;
}

bool replay_derivation(const FactBase& facts, const Derivation& derivation) {
  if (derivation.chain.empty()) return false;
  if (!facts.match(derivation.chain.front())) return false;
  for (std::size_t i = 1; i < derivation.chain.size(); ++i) {
    const auto& prev = derivation.chain[i - 1];
    const auto& cur = derivation.chain[i];
    if (cur.n != prev.n - 1 || cur.p != prev.p ||
        std::abs(cur.alpha - (prev.alpha + 1.0)) > 1e-12) {
      return false;
    }
  }
  return true;
}

RegionVerdict classify(const EnergyParams& params) {
  RegionVerdict v;
  v.params = params;
  if (!params.sobolev_ok()) {
    v.status = RegionStatus::not_in_sobolev;
    return v;
  }
  const double n = params.n;
  const double p = params.p;
  const double alpha = params.alpha;
  const double m = n + alpha;
  const bool alpha_natural = is_integer(alpha);

  if (alpha_natural && p > m - 1.0 && p < m) v.cases.push_back("Cor1.i");
  if (is_integer(p) && p >= 1.0 && p <= m - 1.0) {
    v.cases.push_back("Cor1.ii");
    v.beta = alpha;
  }
  if (alpha_natural && m >= 7.0 && below_hong_wang_bound(m, p, v.guard_band)) {
    v.cases.push_back("Cor1.iii");
  }

  if (auto tag = published_fact(params, v.guard_band)) {
    v.cases.push_back(*tag);
    v.derivation = {params};
    v.derivation_base = *tag;
  }

  const FactBase facts = FactBase::published();
  if (auto d = induction_closure(facts, params, 1)) {
    v.cases.push_back("induction-derived");
    v.derivation = d->chain;
    v.derivation_base = d->base_tag;
    // Guard band of the seed fact.
    bool guard = false;
    published_fact(d->chain.front(), guard);
    v.guard_band = v.guard_band || guard;
  }

  v.status = v.cases.empty() ? RegionStatus::unknown
                             : RegionStatus::minimizer_known;
  return v;
}

}  // namespace pmin
