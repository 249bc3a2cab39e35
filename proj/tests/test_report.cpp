#include <string>

#include "doctest.h"
#include "pmin/error.hpp"
#include "pmin/report.hpp"

using namespace pmin;

namespace {

QuadratureSpec mc(std::int64_t samples) {
  QuadratureSpec s;
  s.samples = samples;
  return s;
}

// Serialize, parse text, normalize, compare payloads.
void check_round_trip(const std::string& kind, const Json& payload) {
  const Json doc = make_document(kind, payload, {{"timestamp", utc_timestamp()}});
  const Json parsed = Json::parse(doc.dump());
  const Json again = normalize_document(parsed);
  CHECK(again.at("payload") == doc.at("payload"));
  CHECK(again.at("schema") == kSchemaVersion);
  CHECK(again.at("kind") == kind);
  const std::string csv = document_to_csv(doc);
  CHECK(csv.find('\n') != std::string::npos);
}

}  // namespace

TEST_CASE("every report kind round trips losslessly") {
  const auto rep1 = verify_lemma1(rotation_family(2, 0.5), 200, 1);
  check_round_trip("verification", rep1);
  const auto rep3 = verify_lemma3(rotation_family(2, 0.3), EnergyParams::make(2, 2.0, 0.0),
                                  mc(2000));
  check_round_trip("verification", rep3);
  const auto rep4 = verify_lemma4(10);
  check_round_trip("verification", rep4);
  check_round_trip("verdict", classify(EnergyParams::make(3, 3.5, 1)));
  check_round_trip("verdict", classify(EnergyParams::make(7, 7 - 2 * std::sqrt(6.0), 0)));
  check_round_trip("verdicts", std::vector<RegionVerdict>{classify(EnergyParams::make(3, 2, 0)),
                                                          classify(EnergyParams::make(3, 4, 0.5))});
  ProbeOptions po;
  po.refine = true;
  check_round_trip("probe", probe_family(EnergyParams::make(3, 2, 0), family_from_string("rotation"),
                                         linear_grid(-0.5, 0.5, 5), mc(1000), po));
  check_round_trip("closed_forms", closed_forms_report(EnergyParams::make(3, 2, 0)));
  check_round_trip("closed_forms", closed_forms_report(EnergyParams::make(3, 4, 0)));
  EnergyReport er;
  er.map_label = "radial";
  er.params = EnergyParams::make(3, 2, 0);
  er.spec = mc(1000);
  er.estimate = energy(radial_projection(3), er.params, er.spec);
  er.closed_form = radial_energy_closed_form(er.params);
  check_round_trip("energy", er);
}

TEST_CASE("doubles survive serialization exactly") {
  const auto v = verify_lemma3(rotation_family(3, 0.3), EnergyParams::make(3, 2.5, 0.5), mc(3000));
  const Json j = v;
  const auto back = Json::parse(j.dump()).get<VerificationReport>();
  CHECK(back.lhs.value == v.lhs.value);
  CHECK(back.rhs.std_error == v.rhs.std_error);
  CHECK(back.margin == v.margin);
  CHECK(back.steps.size() == v.steps.size());
  CHECK(back.params == v.params);
}

TEST_CASE("closed forms report contents") {
  const auto r = closed_forms_report(EnergyParams::make(3, 2, 0));
  REQUIRE(r.radial_energy.has_value());
  CHECK(std::abs(*r.radial_energy - 25.132741) < 1e-6);
  CHECK(r.sobolev_ok);
  const auto d = closed_forms_report(EnergyParams::make(3, 4, 0));
  CHECK_FALSE(d.radial_energy.has_value());
  CHECK_FALSE(d.sobolev_ok);
}

TEST_CASE("documents are validated") {
  const Json doc = make_document("verdict", classify(EnergyParams::make(3, 2, 0)));
  CHECK_NOTHROW(document_payload(doc, "verdict"));
  CHECK_THROWS_AS(document_payload(doc, "probe"), Error);
  Json bad = doc;
  bad["schema"] = 2;
  CHECK_THROWS_AS(document_payload(bad), Error);
  Json unknown = doc;
  unknown["kind"] = "mystery";
  CHECK_THROWS_AS(normalize_document(unknown), Error);
  Json broken = doc;
  broken["payload"]["params"]["n"] = 1;
  CHECK_THROWS(normalize_document(broken));
}

TEST_CASE("payload is deterministic; timestamp lives in metadata") {
  const auto a = make_document("verification", verify_lemma2(3, 200, 5),
                               {{"timestamp", "2000-01-01T00:00:00Z"}});
  const auto b = make_document("verification", verify_lemma2(3, 200, 5),
                               {{"timestamp", utc_timestamp()}});
  CHECK(a.at("payload") == b.at("payload"));
  CHECK(a.at("payload").dump().find("timestamp") == std::string::npos);
}
