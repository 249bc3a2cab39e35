#include "pmin/pmin.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "pmin/closed_forms.hpp"
#include "pmin/lifting.hpp"
#include "pmin/prober.hpp"
#include "pmin/quadrature.hpp"
#include "pmin/region_classifier.hpp"
#include "pmin/report.hpp"
#include "pmin/verifier.hpp"

struct pmin_map {
  pmin::SphereMap map;
};

namespace {

thread_local std::string g_last_error;

pmin_status fail(pmin_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
pmin_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const pmin::Error& e) {
    return fail(static_cast<pmin_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(PMIN_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PMIN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PMIN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PMIN_ERR_INTERNAL, "unknown exception");
  }
}

pmin_status require(const void* ptr, const char* what) {
  if (ptr == nullptr) {
    return fail(PMIN_ERR_INVALID_ARGUMENT, std::string(what) + " is null");
  }
  return PMIN_OK;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PMIN_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return 1;
}

pmin::QuadratureSpec to_spec(const pmin_quadrature_spec& c) {
  pmin::QuadratureSpec s;
  if (c.method == PMIN_METHOD_MONTE_CARLO) {
    s.method = pmin::QuadratureMethod::monte_carlo;
  } else if (c.method == PMIN_METHOD_RADIAL_PRODUCT) {
    s.method = pmin::QuadratureMethod::radial_product;
  } else {
    throw pmin::Error(pmin::ErrorCode::invalid_argument,
                      "unknown quadrature method " + std::to_string(c.method));
  }
  s.samples = c.samples;
  s.radial_nodes = c.radial_nodes;
  s.seed = c.seed;
  s.r_min = c.r_min;
  s.workers = c.workers;
  s.validate();
  return s;
}

pmin::Json metadata(const pmin::QuadratureSpec* spec = nullptr) {
  pmin::Json m{{"timestamp", pmin::utc_timestamp()}};
  if (spec != nullptr) m["workers"] = spec->workers;
  return m;
}

pmin_status emit(const pmin::Json& doc, char** out_json) {
  *out_json = copy_string(doc.dump(2));
  return PMIN_OK;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

extern "C" {

int pmin_schema_version(void) { return pmin::kSchemaVersion; }

const char* pmin_status_name(pmin_status status) {
  switch (status) {
    case PMIN_OK: return "ok";
    case PMIN_ERR_BUFFER_TOO_SMALL: return "buffer-too-small";
    case PMIN_ERR_PARSE: return "parse-error";
    case PMIN_ERR_INTERNAL: return "internal-error";
    default:
      if (status >= PMIN_ERR_INVALID_ARGUMENT && status <= PMIN_ERR_UNKNOWN_LABEL) {
        return pmin::to_string(static_cast<pmin::ErrorCode>(status));
      }
      return "unknown-status";
  }
}

const char* pmin_last_error(void) { return g_last_error.c_str(); }

void pmin_string_free(char* s) { std::free(s); }

void pmin_quadrature_spec_init(pmin_quadrature_spec* spec) {
  if (spec == nullptr) return;
  const pmin::QuadratureSpec d;
  spec->method = PMIN_METHOD_MONTE_CARLO;
  spec->samples = d.samples;
  spec->radial_nodes = d.radial_nodes;
  spec->seed = default_seed();
  spec->r_min = d.r_min;
  spec->workers = d.workers;
}

void pmin_verify_options_init(pmin_verify_options* options) {
  if (options == nullptr) return;
  options->check = "lemma1";
  options->n = 2;
  options->p = 2.0;
  options->alpha = 0.0;
  options->map_label = "radial";
  options->n_points = 10000;
  options->tol = 0.0;
  options->sigmas = 3.0;
  options->n_max = 50;
  pmin_quadrature_spec_init(&options->spec);
}

void pmin_probe_options_init(pmin_probe_options* options) {
  if (options == nullptr) return;
  options->n = 3;
  options->p = 2.0;
  options->alpha = 0.0;
  options->family = "rotation";
  options->field = "const";
  options->axis = -1;
  options->plane_i = 0;
  options->plane_j = 1;
  options->t_min = -1.0;
  options->t_max = 1.0;
  options->steps = 21;
  options->h = 0.05;
  options->refine = 0;
  pmin_quadrature_spec_init(&options->spec);
}

pmin_status pmin_map_from_label(const char* label, int n, pmin_map** out) {
  if (auto st = require(label, "label")) return st;
  if (auto st = require(out, "out")) return st;
  return guarded([&] {
    *out = new pmin_map{pmin::map_from_label(label, n)};
    return PMIN_OK;
  });
}

pmin_status pmin_map_lift(const pmin_map* base, pmin_map** out) {
  if (auto st = require(base, "base")) return st;
  if (auto st = require(out, "out")) return st;
  return guarded([&] {
    *out = new pmin_map{pmin::lift(base->map).as_sphere_map()};
    return PMIN_OK;
  });
}

void pmin_map_free(pmin_map* map) { delete map; }

int pmin_map_dim(const pmin_map* map) {
  return map == nullptr ? 0 : map->map.dim_in();
}

pmin_status pmin_map_label(const pmin_map* map, char** out) {
  if (auto st = require(map, "map")) return st;
  if (auto st = require(out, "out")) return st;
  return guarded([&] {
    *out = copy_string(map->map.label());
    return PMIN_OK;
  });
}

pmin_status pmin_map_evaluate(const pmin_map* map, const double* x, size_t len,
                              double* out, size_t out_len) {
  if (auto st = require(map, "map")) return st;
  if (auto st = require(x, "x")) return st;
  if (auto st = require(out, "out")) return st;
  return guarded([&] {
    if (out_len < static_cast<size_t>(map->map.dim_out())) {
      return fail(PMIN_ERR_BUFFER_TOO_SMALL,
                  "output buffer needs " + std::to_string(map->map.dim_out()) +
                      " entries");
    }
    const pmin::Point point =
        Eigen::Map<const Eigen::VectorXd>(x, static_cast<Eigen::Index>(len));
    const pmin::Point value = map->map.evaluate(point);
    for (Eigen::Index i = 0; i < value.size(); ++i) out[i] = value[i];
    return PMIN_OK;
  });
}

pmin_status pmin_map_gradient_norm_sq(const pmin_map* map, const double* x,
                                      size_t len, double* out) {
  if (auto st = require(map, "map")) return st;
  if (auto st = require(x, "x")) return st;
  if (auto st = require(out, "out")) return st;
  return guarded([&] {
    const pmin::Point point =
        Eigen::Map<const Eigen::VectorXd>(x, static_cast<Eigen::Index>(len));
    if (point.size() != map->map.dim_in()) {
      return fail(PMIN_ERR_INVALID_ARGUMENT, "point has the wrong dimension");
    }
    *out = pmin::gradient_norm_sq(map->map, point).value;
    return PMIN_OK;
  });
}

pmin_status pmin_energy(const pmin_map* map, double p, double alpha,
                        const pmin_quadrature_spec* spec, int allow_divergent,
                        pmin_estimate* out) {
  if (auto st = require(map, "map")) return st;
  if (auto st = require(spec, "spec")) return st;
  if (auto st = require(out, "out")) return st;
  return guarded([&] {
    const auto params = pmin::EnergyParams::make(map->map.dim_in(), p, alpha);
    const auto est = pmin::energy(map->map, params, to_spec(*spec),
                                  pmin::EnergyOptions{allow_divergent != 0});
    out->value = est.value;
    out->std_error = est.std_error;
    out->n_eval = est.n_eval;
    out->has_bias_bound = est.bias_bound.has_value() ? 1 : 0;
    out->bias_bound = est.bias_bound.value_or(0.0);
    return PMIN_OK;
  });
}

pmin_status pmin_energy_json(const char* map_label, int n, double p,
                             double alpha, const pmin_quadrature_spec* spec,
                             int allow_divergent, char** out_json) {
  if (auto st = require(map_label, "map_label")) return st;
  if (auto st = require(spec, "spec")) return st;
  if (auto st = require(out_json, "out_json")) return st;
  return guarded([&] {
    pmin::EnergyReport rep;
    rep.map_label = map_label;
    rep.params = pmin::EnergyParams::make(n, p, alpha);
    rep.spec = to_spec(*spec);
    const auto map = pmin::map_from_label(map_label, n);
    rep.map_label = map.label();
    rep.estimate = pmin::energy(map, rep.params, rep.spec,
                                pmin::EnergyOptions{allow_divergent != 0});
    if (map.label() == "radial" && rep.params.sobolev_ok()) {
      rep.closed_form = pmin::radial_energy_closed_form(rep.params);
    }
    return emit(pmin::make_document("energy", rep, metadata(&rep.spec)),
                out_json);
  });
}

pmin_status pmin_closed_forms_json(int n, double p, double alpha,
                                   char** out_json) {
  if (auto st = require(out_json, "out_json")) return st;
  return guarded([&] {
    const auto rep =
        pmin::closed_forms_report(pmin::EnergyParams::make(n, p, alpha));
    return emit(pmin::make_document("closed_forms", rep, metadata()), out_json);
  });
}

pmin_status pmin_verify_json(const pmin_verify_options* options,
                             char** out_json, int* passed) {
  if (auto st = require(options, "options")) return st;
  if (auto st = require(options->check, "options->check")) return st;
  if (auto st = require(out_json, "out_json")) return st;
  return guarded([&] {
    const std::string check = options->check;
    const double tol = options->tol;
    const auto spec = to_spec(options->spec);
    pmin::InequalityPolicy policy;
    if (options->sigmas > 0.0) policy.sigmas = options->sigmas;
    auto base_map = [&] {
      if (options->map_label == nullptr) {
        throw pmin::Error(pmin::ErrorCode::invalid_argument,
                          "check '" + check + "' needs a map label");
      }
      return pmin::map_from_label(options->map_label, options->n);
    };

    pmin::VerificationReport rep;
    if (check == "lemma1") {
      rep = pmin::verify_lemma1(base_map(), options->n_points, spec.seed,
                                tol > 0.0 ? tol : 1e-4);
    } else if (check == "lemma2") {
      rep = pmin::verify_lemma2(options->n, options->n_points, spec.seed,
                                tol > 0.0 ? tol : 1e-5);
    } else if (check == "lemma3") {
      rep = pmin::verify_lemma3(
          base_map(),
          pmin::EnergyParams::make(options->n, options->p, options->alpha),
          spec, policy);
    } else if (check == "lemma4") {
      rep = pmin::verify_lemma4(options->n_max, tol > 0.0 ? tol : 1e-12);
    } else if (check == "theorem") {
      rep = pmin::verify_theorem_chain(
          base_map(),
          pmin::EnergyParams::make(options->n, options->p, options->alpha),
          spec, policy);
    } else {
      return fail(PMIN_ERR_INVALID_ARGUMENT,
                  "unknown check '" + check +
                      "' (expected lemma1|lemma2|lemma3|lemma4|theorem)");
    }
    if (passed != nullptr) *passed = rep.passed ? 1 : 0;
    return emit(pmin::make_document("verification", rep, metadata(&spec)),
                out_json);
  });
}

pmin_status pmin_classify_json(int n, double p, double alpha, char** out_json) {
  if (auto st = require(out_json, "out_json")) return st;
  return guarded([&] {
    const auto v = pmin::classify(pmin::EnergyParams::make(n, p, alpha));
    return emit(pmin::make_document("verdict", v, metadata()), out_json);
  });
}

pmin_status pmin_classify_batch_json(const char* csv, char** out_json) {
  if (auto st = require(csv, "csv")) return st;
  if (auto st = require(out_json, "out_json")) return st;
  return guarded([&] {
    std::istringstream in(csv);
    std::string line;
    std::vector<pmin::RegionVerdict> verdicts;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> fields;
      std::stringstream ls(line);
      std::string f;
      while (std::getline(ls, f, ',')) fields.push_back(trim(f));
      if (fields.size() != 3) {
        return fail(PMIN_ERR_PARSE, "line " + std::to_string(line_no) +
                                        ": expected n,p,alpha");
      }
      char* end = nullptr;
      const long n = std::strtol(fields[0].c_str(), &end, 10);
      if (end == fields[0].c_str() || *end != '\0') {
        if (verdicts.empty() && line_no == 1) continue;  // header
        return fail(PMIN_ERR_PARSE,
                    "line " + std::to_string(line_no) + ": bad n");
      }
      const double p = std::strtod(fields[1].c_str(), &end);
      if (*end != '\0' || fields[1].empty()) {
        return fail(PMIN_ERR_PARSE, "line " + std::to_string(line_no) + ": bad p");
      }
      const double alpha = std::strtod(fields[2].c_str(), &end);
      if (*end != '\0' || fields[2].empty()) {
        return fail(PMIN_ERR_PARSE,
                    "line " + std::to_string(line_no) + ": bad alpha");
      }
      verdicts.push_back(pmin::classify(
          pmin::EnergyParams::make(static_cast<int>(n), p, alpha)));
    }
    return emit(pmin::make_document("verdicts", verdicts, metadata()), out_json);
  });
}

pmin_status pmin_probe_json(const pmin_probe_options* options, char** out_json) {
  if (auto st = require(options, "options")) return st;
  if (auto st = require(options->family, "options->family")) return st;
  if (auto st = require(out_json, "out_json")) return st;
  return guarded([&] {
    const auto params =
        pmin::EnergyParams::make(options->n, options->p, options->alpha);
    auto family = pmin::family_from_string(options->family);
    if (options->field != nullptr) family.field = options->field;
    family.axis = options->axis;
    family.plane = {options->plane_i, options->plane_j};
    const auto spec = to_spec(options->spec);
    pmin::ProbeOptions popts;
    popts.second_variation_step = options->h;
    popts.refine = options->refine != 0;
    const auto grid =
        pmin::linear_grid(options->t_min, options->t_max, options->steps);
    const auto res = pmin::probe_family(params, family, grid, spec, popts);
    return emit(pmin::make_document("probe", res, metadata(&spec)), out_json);
  });
}

pmin_status pmin_report_normalize(const char* json, char** out_json) {
  if (auto st = require(json, "json")) return st;
  if (auto st = require(out_json, "out_json")) return st;
  return guarded([&] {
    return emit(pmin::normalize_document(pmin::Json::parse(json)), out_json);
  });
}

pmin_status pmin_report_to_csv(const char* json, char** out_csv) {
  if (auto st = require(json, "json")) return st;
  if (auto st = require(out_csv, "out_csv")) return st;
  return guarded([&] {
    *out_csv = copy_string(pmin::document_to_csv(pmin::Json::parse(json)));
    return PMIN_OK;
  });
}

}  // extern "C"
