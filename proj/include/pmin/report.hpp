#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "pmin/closed_forms.hpp"
#include "pmin/prober.hpp"
#include "pmin/quadrature.hpp"
#include "pmin/region_classifier.hpp"
#include "pmin/verifier.hpp"

namespace pmin {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Every constant the `closed-forms` subcommand prints for (n, p, alpha).
struct ClosedFormsReport {
  EnergyParams params;
  double log_gamma_half_n = 0.0;          // log Gamma(n/2)
  double log_gamma_half_n_plus_one = 0.0; // log Gamma((n+1)/2)
  double wallis_n_minus_one = 0.0;        // W_{n-1}
  double lemma4_value = 0.0;
  double lemma4_residual = 0.0;
  double sphere_measure_n_minus_one = 0.0;  // |S^{n-1}|
  double sphere_measure_n = 0.0;            // |S^n|
  bool sobolev_ok = false;
  std::optional<double> radial_energy;         // E^n_{p,alpha}(x/|x|)
  std::optional<double> lifted_radial_energy;  // E^{n+1}_{p,alpha}(x/|x|)
  LiftBoundConstants lift_constants;
};

ClosedFormsReport closed_forms_report(const EnergyParams& params);

struct EnergyReport {
  std::string map_label;
  EnergyParams params;
  QuadratureSpec spec;
  Estimate estimate;
  std::optional<double> closed_form;  // radial projection only
};

void to_json(Json& j, const EnergyParams& v);
void from_json(const Json& j, EnergyParams& v);
void to_json(Json& j, const QuadratureSpec& v);
void from_json(const Json& j, QuadratureSpec& v);
void to_json(Json& j, const Estimate& v);
void from_json(const Json& j, Estimate& v);
void to_json(Json& j, const CheckStep& v);
void from_json(const Json& j, CheckStep& v);
void to_json(Json& j, const VerificationReport& v);
void from_json(const Json& j, VerificationReport& v);
void to_json(Json& j, const RegionVerdict& v);
void from_json(const Json& j, RegionVerdict& v);
void to_json(Json& j, const GridEnergy& v);
void from_json(const Json& j, GridEnergy& v);
void to_json(Json& j, const SecondVariation& v);
void from_json(const Json& j, SecondVariation& v);
void to_json(Json& j, const Refinement& v);
void from_json(const Json& j, Refinement& v);
void to_json(Json& j, const ProbeResult& v);
void from_json(const Json& j, ProbeResult& v);
void to_json(Json& j, const LiftBoundConstants& v);
void from_json(const Json& j, LiftBoundConstants& v);
void to_json(Json& j, const EnergyReport& v);
void from_json(const Json& j, EnergyReport& v);
void to_json(Json& j, const ClosedFormsReport& v);
void from_json(const Json& j, ClosedFormsReport& v);

// {"schema": 1, "kind": kind, "payload": payload, "metadata": {...}}.
// Only the payload is covered by the determinism contract; the timestamp
// lives in metadata.
Json make_document(const std::string& kind, Json payload,
                   Json metadata = Json::object());

// Payload of a document after checking its schema version (and kind, when
// non-empty).
const Json& document_payload(const Json& doc, const std::string& kind = "");

// Re-parses a document into its report type and serializes it again, so a
// lossless document comes back with an identical payload.
Json normalize_document(const Json& doc);

// CSV projection (header line + rows) of a document.
std::string document_to_csv(const Json& doc);

// Current UTC time as ISO-8601.
std::string utc_timestamp();

}  // namespace pmin
