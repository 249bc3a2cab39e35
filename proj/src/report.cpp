#include "pmin/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "format.hpp"

namespace pmin {

namespace {

template <class T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  if (v) {
    j[key] = *v;
  } else {
    j[key] = nullptr;
  }
}

template <class T>
std::optional<T> get_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

std::string csv_number(double v) { return detail::format_number(v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string triple_string(const EnergyParams& t) {
  return "(" + std::to_string(t.n) + " " + csv_number(t.p) + " " +
         csv_number(t.alpha) + ")";
}

}  // namespace

ClosedFormsReport closed_forms_report(const EnergyParams& params) {
  const int n = params.n;
  ClosedFormsReport r;
  r.params = params;
  r.log_gamma_half_n = log_gamma(n / 2.0);
  r.log_gamma_half_n_plus_one = log_gamma((n + 1) / 2.0);
  r.wallis_n_minus_one = wallis(n - 1).value;
  r.lemma4_value = lemma4_identity(n);
  r.lemma4_residual = std::abs(r.lemma4_value - std::sqrt(std::numbers::pi) / 2.0);
  r.sphere_measure_n_minus_one = sphere_measure(n - 1);
  r.sphere_measure_n = sphere_measure(n);
  r.sobolev_ok = params.sobolev_ok();
  if (r.sobolev_ok) r.radial_energy = radial_energy_closed_form(params);
  const EnergyParams lifted{n + 1, params.p, params.alpha};
  if (lifted.sobolev_ok()) {
    r.lifted_radial_energy = radial_energy_closed_form(lifted);
  }
  r.lift_constants = lemma3_rhs_constants(n, params.p);
  return r;
}

void to_json(Json& j, const EnergyParams& v) {
  j = Json{{"n", v.n}, {"p", v.p}, {"alpha", v.alpha}};
}

void from_json(const Json& j, EnergyParams& v) {
  v = EnergyParams::make(j.at("n").get<int>(), j.at("p").get<double>(),
                         j.at("alpha").get<double>());
}

void to_json(Json& j, const QuadratureSpec& v) {
  j = Json{{"method", to_string(v.method)}, {"samples", v.samples},
           {"radial_nodes", v.radial_nodes}, {"seed", v.seed},
           {"r_min", v.r_min}, {"workers", v.workers}};
}

void from_json(const Json& j, QuadratureSpec& v) {
  v.method = quadrature_method_from_string(j.at("method").get<std::string>());
  v.samples = j.at("samples").get<std::int64_t>();
  v.radial_nodes = j.at("radial_nodes").get<int>();
  v.seed = j.at("seed").get<std::uint64_t>();
  v.r_min = j.at("r_min").get<double>();
  v.workers = j.at("workers").get<int>();
}

void to_json(Json& j, const Estimate& v) {
  j = Json{{"value", v.value}, {"std_error", v.std_error}, {"n_eval", v.n_eval}};
  put_optional(j, "bias_bound", v.bias_bound);
}

void from_json(const Json& j, Estimate& v) {
  v.value = j.at("value").get<double>();
  v.std_error = j.at("std_error").get<double>();
  v.n_eval = j.at("n_eval").get<std::int64_t>();
  v.bias_bound = get_optional<double>(j, "bias_bound");
}

void to_json(Json& j, const CheckStep& v) {
  j = Json{{"name", v.name},         {"kind", to_string(v.kind)},
           {"lhs", v.lhs},           {"rhs", v.rhs},
           {"margin", v.margin},     {"sigma", v.sigma},
           {"tolerance", v.tolerance}, {"holds", v.holds},
           {"required", v.required}};
}

void from_json(const Json& j, CheckStep& v) {
  v.name = j.at("name").get<std::string>();
  v.kind = check_kind_from_string(j.at("kind").get<std::string>());
  v.lhs = j.at("lhs").get<double>();
  v.rhs = j.at("rhs").get<double>();
  v.margin = j.at("margin").get<double>();
  v.sigma = j.at("sigma").get<double>();
  v.tolerance = j.at("tolerance").get<double>();
  v.holds = j.at("holds").get<bool>();
  v.required = j.at("required").get<bool>();
}

void to_json(Json& j, const VerificationReport& v) {
  j = Json{{"check_id", v.check_id}, {"kind", to_string(v.kind)},
           {"n", v.n},               {"map", v.map_label},
           {"lhs", v.lhs},           {"rhs", v.rhs},
           {"margin", v.margin},     {"tolerance", v.tolerance},
           {"passed", v.passed},     {"n_points", v.n_points},
           {"seed", v.seed},         {"workers", v.workers},
           {"resampled", v.resampled}, {"steps", v.steps},
           {"note", v.note}};
  put_optional(j, "params", v.params);
}

void from_json(const Json& j, VerificationReport& v) {
  v.check_id = j.at("check_id").get<std::string>();
  v.kind = check_kind_from_string(j.at("kind").get<std::string>());
  v.params = get_optional<EnergyParams>(j, "params");
  v.n = j.at("n").get<int>();
  v.map_label = j.at("map").get<std::string>();
  v.lhs = j.at("lhs").get<Estimate>();
  v.rhs = j.at("rhs").get<Estimate>();
  v.margin = j.at("margin").get<double>();
  v.tolerance = j.at("tolerance").get<double>();
  v.passed = j.at("passed").get<bool>();
  v.n_points = j.at("n_points").get<std::int64_t>();
  v.seed = j.at("seed").get<std::uint64_t>();
  v.workers = j.at("workers").get<int>();
  v.resampled = j.at("resampled").get<std::int64_t>();
  v.steps = j.at("steps").get<std::vector<CheckStep>>();
  v.note = j.at("note").get<std::string>();
}

void to_json(Json& j, const RegionVerdict& v) {
  j = Json{{"params", v.params},
           {"status", to_string(v.status)},
           {"cases", v.cases},
           {"derivation", v.derivation},
           {"derivation_base", v.derivation_base},
           {"guard_band", v.guard_band}};
  put_optional(j, "beta", v.beta);
}

void from_json(const Json& j, RegionVerdict& v) {
  v.params = j.at("params").get<EnergyParams>();
  v.status = region_status_from_string(j.at("status").get<std::string>());
  v.cases = j.at("cases").get<std::vector<std::string>>();
  v.derivation = j.at("derivation").get<std::vector<EnergyParams>>();
  v.derivation_base = j.at("derivation_base").get<std::string>();
  v.guard_band = j.at("guard_band").get<bool>();
  v.beta = get_optional<double>(j, "beta");
}

void to_json(Json& j, const GridEnergy& v) {
  j = Json{{"parameter", v.parameter},
           {"energy", v.energy},
           {"difference", v.difference}};
}

void from_json(const Json& j, GridEnergy& v) {
  v.parameter = j.at("parameter").get<double>();
  v.energy = j.at("energy").get<Estimate>();
  v.difference = j.at("difference").get<Estimate>();
}

void to_json(Json& j, const SecondVariation& v) {
  j = Json{{"h", v.h},
           {"value", v.value},
           {"std_error", v.std_error},
           {"first_difference", v.first_difference},
           {"first_difference_error", v.first_difference_error}};
}

void from_json(const Json& j, SecondVariation& v) {
  v.h = j.at("h").get<double>();
  v.value = j.at("value").get<double>();
  v.std_error = j.at("std_error").get<double>();
  v.first_difference = j.at("first_difference").get<double>();
  v.first_difference_error = j.at("first_difference_error").get<double>();
}

void to_json(Json& j, const Refinement& v) {
  j = Json{{"parameter", v.parameter},
           {"difference", v.difference},
           {"evaluations", v.evaluations}};
}

void from_json(const Json& j, Refinement& v) {
  v.parameter = j.at("parameter").get<double>();
  v.difference = j.at("difference").get<Estimate>();
  v.evaluations = j.at("evaluations").get<int>();
}

void to_json(Json& j, const ProbeResult& v) {
  j = Json{{"params", v.params},
           {"family", v.family},
           {"spec", v.spec},
           {"energies", v.energies},
           {"reference_energy", v.reference_energy},
           {"min_margin", v.min_margin},
           {"min_margin_sigma", v.min_margin_sigma},
           {"argmin", v.argmin},
           {"concordant", v.concordant},
           {"empirical_only", v.empirical_only}};
  put_optional(j, "second_variation", v.second_variation);
  put_optional(j, "refinement", v.refinement);
}

void from_json(const Json& j, ProbeResult& v) {
  v.params = j.at("params").get<EnergyParams>();
  v.family = j.at("family").get<std::string>();
  v.spec = j.at("spec").get<QuadratureSpec>();
  v.energies = j.at("energies").get<std::vector<GridEnergy>>();
  v.reference_energy = j.at("reference_energy").get<double>();
  v.min_margin = j.at("min_margin").get<double>();
  v.min_margin_sigma = j.at("min_margin_sigma").get<double>();
  v.argmin = j.at("argmin").get<double>();
  v.concordant = j.at("concordant").get<bool>();
  v.empirical_only = j.at("empirical_only").get<bool>();
  v.second_variation = get_optional<SecondVariation>(j, "second_variation");
  v.refinement = get_optional<Refinement>(j, "refinement");
}

void to_json(Json& j, const LiftBoundConstants& v) {
  j = Json{{"c1", v.c1}, {"c2", v.c2}};
}

void from_json(const Json& j, LiftBoundConstants& v) {
  v.c1 = j.at("c1").get<double>();
  v.c2 = j.at("c2").get<double>();
}

void to_json(Json& j, const EnergyReport& v) {
  j = Json{{"map", v.map_label},
           {"params", v.params},
           {"spec", v.spec},
           {"estimate", v.estimate}};
  put_optional(j, "closed_form", v.closed_form);
}

void from_json(const Json& j, EnergyReport& v) {
  v.map_label = j.at("map").get<std::string>();
  v.params = j.at("params").get<EnergyParams>();
  v.spec = j.at("spec").get<QuadratureSpec>();
  v.estimate = j.at("estimate").get<Estimate>();
  v.closed_form = get_optional<double>(j, "closed_form");
}

void to_json(Json& j, const ClosedFormsReport& v) {
  j = Json{{"params", v.params},
           {"log_gamma_half_n", v.log_gamma_half_n},
           {"log_gamma_half_n_plus_one", v.log_gamma_half_n_plus_one},
           {"wallis_n_minus_one", v.wallis_n_minus_one},
           {"lemma4_value", v.lemma4_value},
           {"lemma4_residual", v.lemma4_residual},
           {"sphere_measure_n_minus_one", v.sphere_measure_n_minus_one},
           {"sphere_measure_n", v.sphere_measure_n},
           {"sobolev_ok", v.sobolev_ok},
           {"lift_constants", v.lift_constants}};
  put_optional(j, "radial_energy", v.radial_energy);
  put_optional(j, "lifted_radial_energy", v.lifted_radial_energy);
}

void from_json(const Json& j, ClosedFormsReport& v) {
  v.params = j.at("params").get<EnergyParams>();
  v.log_gamma_half_n = j.at("log_gamma_half_n").get<double>();
  v.log_gamma_half_n_plus_one = j.at("log_gamma_half_n_plus_one").get<double>();
  v.wallis_n_minus_one = j.at("wallis_n_minus_one").get<double>();
  v.lemma4_value = j.at("lemma4_value").get<double>();
  v.lemma4_residual = j.at("lemma4_residual").get<double>();
  v.sphere_measure_n_minus_one = j.at("sphere_measure_n_minus_one").get<double>();
  v.sphere_measure_n = j.at("sphere_measure_n").get<double>();
  v.sobolev_ok = j.at("sobolev_ok").get<bool>();
  v.lift_constants = j.at("lift_constants").get<LiftBoundConstants>();
  v.radial_energy = get_optional<double>(j, "radial_energy");
  v.lifted_radial_energy = get_optional<double>(j, "lifted_radial_energy");
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

Json make_document(const std::string& kind, Json payload, Json metadata) {
  if (!metadata.contains("generator")) metadata["generator"] = "pmin";
  return Json{{"schema", kSchemaVersion},
              {"kind", kind},
              {"payload", std::move(payload)},
              {"metadata", std::move(metadata)}};
}

const Json& document_payload(const Json& doc, const std::string& kind) {
  if (!doc.is_object() || !doc.contains("schema") ||
      doc.at("schema") != kSchemaVersion) {
    throw Error(ErrorCode::invalid_argument,
                "report document lacks \"schema\": " +
                    std::to_string(kSchemaVersion));
  }
  if (!kind.empty() && doc.at("kind") != kind) {
    throw Error(ErrorCode::invalid_argument,
                "expected a '" + kind + "' document, got '" +
                    doc.at("kind").get<std::string>() + "'");
  }
  return doc.at("payload");
}

Json normalize_document(const Json& doc) {
  const Json& payload = document_payload(doc);
  const std::string kind = doc.at("kind").get<std::string>();
  Json out;
  if (kind == "verification") {
    out = payload.get<VerificationReport>();
  } else if (kind == "verdict") {
    out = payload.get<RegionVerdict>();
  } else if (kind == "verdicts") {
    out = payload.get<std::vector<RegionVerdict>>();
  } else if (kind == "probe") {
    out = payload.get<ProbeResult>();
  } else if (kind == "closed_forms") {
    out = payload.get<ClosedFormsReport>();
  } else if (kind == "energy") {
    out = payload.get<EnergyReport>();
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown document kind '" + kind + "'");
  }
  return make_document(kind, std::move(out), doc.value("metadata", Json::object()));
}

std::string document_to_csv(const Json& doc) {
  const Json& payload = document_payload(doc);
  const std::string kind = doc.at("kind").get<std::string>();
  std::ostringstream out;
  if (kind == "verification") {
    const auto r = payload.get<VerificationReport>();
    out << "check_id,n,p,alpha,map,lhs,lhs_std_error,rhs,rhs_std_error,margin,"
           "tolerance,passed\n";
    out << r.check_id << ',' << r.n << ','
        << (r.params ? csv_number(r.params->p) : "") << ','
        << (r.params ? csv_number(r.params->alpha) : "") << ','
        << csv_field(r.map_label) << ',' << csv_number(r.lhs.value) << ','
        << csv_number(r.lhs.std_error) << ',' << csv_number(r.rhs.value) << ','
        << csv_number(r.rhs.std_error) << ',' << csv_number(r.margin) << ','
        << csv_number(r.tolerance) << ',' << (r.passed ? "true" : "false")
        << '\n';
  } else if (kind == "verdict" || kind == "verdicts") {
    std::vector<RegionVerdict> verdicts;
    if (kind == "verdict") {
      verdicts.push_back(payload.get<RegionVerdict>());
    } else {
      verdicts = payload.get<std::vector<RegionVerdict>>();
    }
    out << "n,p,alpha,status,cases,derivation\n";
    for (const auto& v : verdicts) {
      std::vector<std::string> chain;
      for (const auto& t : v.derivation) chain.push_back(triple_string(t));
      out << v.params.n << ',' << csv_number(v.params.p) << ','
          << csv_number(v.params.alpha) << ',' << to_string(v.status) << ','
          << csv_field(join(v.cases, ";")) << ','
          << csv_field(join(chain, ";")) << '\n';
    }
  } else if (kind == "probe") {
    const auto r = payload.get<ProbeResult>();
    out << "t,energy,std_error,difference,difference_std_error\n";
    for (const auto& g : r.energies) {
      out << csv_number(g.parameter) << ',' << csv_number(g.energy.value) << ','
          << csv_number(g.energy.std_error) << ','
          << csv_number(g.difference.value) << ','
          << csv_number(g.difference.std_error) << '\n';
    }
  } else if (kind == "energy") {
    const auto r = payload.get<EnergyReport>();
    out << "map,n,p,alpha,value,std_error\n";
    out << csv_field(r.map_label) << ',' << r.params.n << ','
        << csv_number(r.params.p) << ',' << csv_number(r.params.alpha) << ','
        << csv_number(r.estimate.value) << ','
        << csv_number(r.estimate.std_error) << '\n';
  } else if (kind == "closed_forms") {
    const auto r = payload.get<ClosedFormsReport>();
    out << "n,p,alpha,radial_energy,lifted_radial_energy,wallis_n_minus_one,"
           "lemma4_residual,c1,c2\n";
    out << r.params.n << ',' << csv_number(r.params.p) << ','
        << csv_number(r.params.alpha) << ','
        << (r.radial_energy ? csv_number(*r.radial_energy) : "") << ','
        << (r.lifted_radial_energy ? csv_number(*r.lifted_radial_energy) : "")
        << ',' << csv_number(r.wallis_n_minus_one) << ','
        << csv_number(r.lemma4_residual) << ','
        << csv_number(r.lift_constants.c1) << ','
        << csv_number(r.lift_constants.c2) << '\n';
  } else {
    throw Error(ErrorCode::invalid_argument, "no CSV projection for '" + kind + "'");
  }
  return out.str();
}

}  // namespace pmin
