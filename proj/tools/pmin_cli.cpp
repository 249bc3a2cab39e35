// pmin command-line driver. Talks to the library only through pmin.h.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pmin/pmin.h"

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kInternal = 3 };

struct Common {
  std::string method = "mc";
  std::optional<long long> samples;
  int radial_nodes = 0;
  std::optional<unsigned long long> seed;
  double r_min = 0.0;
  int workers = 0;
  std::string out;
  std::string format = "json";
};

struct Params {
  int n = 3;
  double p = 2.0;
  double alpha = 0.0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--method", c.method, "Quadrature: mc or product")
      ->check(CLI::IsMember({"mc", "product"}));
  cmd->add_option("--samples", c.samples,
                  "MC samples / product-rule directions / check points");
  cmd->add_option("--radial-nodes", c.radial_nodes, "Product-rule radial nodes");
  cmd->add_option("--rmin", c.r_min, "Radial cutoff for MC sampling");
  cmd->add_option("--seed", c.seed, "RNG seed (default: $PMIN_SEED or 1)");
  cmd->add_option("--workers", c.workers, "Worker threads");
  cmd->add_option("--out", c.out, "Write the report here instead of stdout");
  cmd->add_option("--format", c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

void add_params(CLI::App* cmd, Params& p, bool need_p = true) {
  cmd->add_option("--n", p.n, "Dimension")->required();
  auto* po = cmd->add_option("--p", p.p, "Exponent p");
  if (need_p) po->required();
  cmd->add_option("--alpha", p.alpha, "Weight exponent alpha");
}

pmin_quadrature_spec make_spec(const Common& c) {
  pmin_quadrature_spec s;
  pmin_quadrature_spec_init(&s);
  s.method = c.method == "product" ? PMIN_METHOD_RADIAL_PRODUCT
                                   : PMIN_METHOD_MONTE_CARLO;
  if (c.samples) s.samples = *c.samples;
  if (c.radial_nodes > 0) s.radial_nodes = c.radial_nodes;
  if (c.seed) s.seed = *c.seed;
  if (c.r_min > 0.0) s.r_min = c.r_min;
  if (c.workers > 0) s.workers = c.workers;
  return s;
}

struct CString {
  char* ptr = nullptr;
  ~CString() { pmin_string_free(ptr); }
};

int report_status(pmin_status st) {
  std::cerr << "pmin: error (" << pmin_status_name(st)
            << "): " << pmin_last_error() << "\n";
  return st == PMIN_ERR_INTERNAL ? kInternal : kUsage;
}

// Output sink opened before any work so an unwritable path fails fast.
class Sink {
 public:
  bool open(const std::string& path) {
    if (path.empty()) return true;
    file_.open(path, std::ios::out | std::ios::trunc);
    return static_cast<bool>(file_);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int emit(const Common& c, Sink& sink, const char* json) {
  std::ostream& os = sink.stream();
  if (c.format == "csv") {
    CString csv;
    if (auto st = pmin_report_to_csv(json, &csv.ptr)) return report_status(st);
    os << csv.ptr;
  } else {
    os << json << "\n";
  }
  os.flush();
  if (!os) {
    std::cerr << "pmin: error: failed writing output\n";
    return kUsage;
  }
  return kPass;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted p-energy tools for sphere-valued maps on the unit ball"};
  app.require_subcommand(1);

  Common energy_c, verify_c, classify_c, probe_c, closed_c;
  Params energy_p, verify_p, classify_p, probe_p, closed_p;

  auto* energy = app.add_subcommand("energy", "Estimate the energy of a map");
  std::string energy_map = "radial";
  bool allow_divergent = false;
  add_params(energy, energy_p);
  add_common(energy, energy_c);
  energy->add_option("--map", energy_map, "Map label");
  energy->add_flag("--allow-divergent", allow_divergent,
                   "Integrate even when p >= n + alpha");

  auto* verify = app.add_subcommand("verify", "Run a numerical check");
  std::string check;
  std::string verify_map = "radial";
  double tol = 0.0;
  double sigmas = 3.0;
  int n_max = 50;
  verify->add_option("check", check, "lemma1|lemma2|lemma3|lemma4|theorem")
      ->required()
      ->check(CLI::IsMember({"lemma1", "lemma2", "lemma3", "lemma4", "theorem"}));
  verify_p.n = 2;
  verify->add_option("--n", verify_p.n, "Base dimension");
  verify->add_option("--p", verify_p.p, "Exponent p");
  verify->add_option("--alpha", verify_p.alpha, "Weight exponent alpha");
  verify->add_option("--map", verify_map, "Base map label");
  verify->add_option("--tol", tol, "Identity tolerance");
  verify->add_option("--sigmas", sigmas, "Inequality sigma multiplier");
  verify->add_option("--n-max", n_max, "Largest n for lemma4");
  add_common(verify, verify_c);

  auto* classify = app.add_subcommand("classify", "Classify (n, p, alpha)");
  std::string batch;
  classify->add_option("--n", classify_p.n, "Dimension");
  classify->add_option("--p", classify_p.p, "Exponent p");
  classify->add_option("--alpha", classify_p.alpha, "Weight exponent alpha");
  classify->add_option("--batch", batch, "CSV file of n,p,alpha rows");
  classify->add_flag("--json", "JSON output (default)");
  classify->add_option("--out", classify_c.out, "Output path");
  classify->add_option("--format", classify_c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* probe = app.add_subcommand("probe", "Scan a comparison family");
  std::string family = "rotation";
  std::string field = "const";
  int axis = -1;
  std::vector<int> plane{0, 1};
  double t_min = -1.0, t_max = 1.0, h = 0.05;
  int steps = 21;
  bool refine = false;
  add_params(probe, probe_p);
  add_common(probe, probe_c);
  probe->add_option("--family", family, "rotation or perturbation")
      ->check(CLI::IsMember({"rotation", "perturbation"}));
  probe->add_option("--field", field, "Perturbation field: const or swirl")
      ->check(CLI::IsMember({"const", "swirl"}));
  probe->add_option("--axis", axis, "Constant field axis");
  probe->add_option("--plane", plane, "Rotation/swirl plane i j")->expected(2);
  probe->add_option("--t-min", t_min, "Grid start");
  probe->add_option("--t-max", t_max, "Grid end");
  probe->add_option("--steps", steps, "Grid points");
  probe->add_option("--sv-step", h, "Second-variation step");
  probe->add_flag("--refine", refine, "Golden-section refinement");

  auto* closed = app.add_subcommand("closed-forms", "Print closed-form constants");
  add_params(closed, closed_p);
  closed->add_option("--out", closed_c.out, "Output path");
  closed->add_option("--format", closed_c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  Sink sink;
  auto open_sink = [&](const Common& c) {
    if (!sink.open(c.out)) {
      std::cerr << "pmin: error: cannot write output file '" << c.out << "'\n";
      return false;
    }
    return true;
  };

  CString json;
  if (*energy) {
    if (!open_sink(energy_c)) return kUsage;
    const auto spec = make_spec(energy_c);
    if (auto st = pmin_energy_json(energy_map.c_str(), energy_p.n, energy_p.p,
                                   energy_p.alpha, &spec, allow_divergent ? 1 : 0,
                                   &json.ptr)) {
      return report_status(st);
    }
    return emit(energy_c, sink, json.ptr);
  }

  if (*verify) {
    if (!open_sink(verify_c)) return kUsage;
    pmin_verify_options o;
    pmin_verify_options_init(&o);
    o.check = check.c_str();
    o.n = verify_p.n;
    o.p = verify_p.p;
    o.alpha = verify_p.alpha;
    o.map_label = verify_map.c_str();
    o.tol = tol;
    o.sigmas = sigmas;
    o.n_max = n_max;
    o.spec = make_spec(verify_c);
    if (check == "lemma2") o.n_points = 1000;
    if ((check == "lemma1" || check == "lemma2") && verify_c.samples) {
      o.n_points = *verify_c.samples;
    }
    int passed = 0;
    if (auto st = pmin_verify_json(&o, &json.ptr, &passed)) return report_status(st);
    if (const int rc = emit(verify_c, sink, json.ptr)) return rc;
    std::cerr << "pmin: " << check << (passed ? " passed" : " FAILED") << "\n";
    return passed ? kPass : kFail;
  }

  if (*classify) {
    if (!open_sink(classify_c)) return kUsage;
    pmin_status st;
    if (!batch.empty()) {
      const auto text = read_file(batch);
      if (!text) {
        std::cerr << "pmin: error: cannot read batch file '" << batch << "'\n";
        return kUsage;
      }
      st = pmin_classify_batch_json(text->c_str(), &json.ptr);
    } else {
      if (classify->count("--n") == 0 || classify->count("--p") == 0) {
        std::cerr << "pmin: error: classify needs --n and --p, or --batch\n";
        return kUsage;
      }
      st = pmin_classify_json(classify_p.n, classify_p.p, classify_p.alpha,
                              &json.ptr);
    }
    if (st) return report_status(st);
    return emit(classify_c, sink, json.ptr);
  }

  if (*probe) {
    if (!open_sink(probe_c)) return kUsage;
    pmin_probe_options o;
    pmin_probe_options_init(&o);
    o.n = probe_p.n;
    o.p = probe_p.p;
    o.alpha = probe_p.alpha;
    o.family = family.c_str();
    o.field = field.c_str();
    o.axis = axis;
    o.plane_i = plane[0];
    o.plane_j = plane[1];
    if (family == "perturbation" && field == "swirl" &&
        probe->count("--plane") == 0) {
      o.plane_i = 0;
      o.plane_j = probe_p.n - 1;
    }
    o.t_min = t_min;
    o.t_max = t_max;
    o.steps = steps;
    o.h = h;
    o.refine = refine ? 1 : 0;
    o.spec = make_spec(probe_c);
    if (auto st = pmin_probe_json(&o, &json.ptr)) return report_status(st);
    return emit(probe_c, sink, json.ptr);
  }

  if (*closed) {
    if (!open_sink(closed_c)) return kUsage;
    if (auto st = pmin_closed_forms_json(closed_p.n, closed_p.p, closed_p.alpha,
                                         &json.ptr)) {
      return report_status(st);
    }
    return emit(closed_c, sink, json.ptr);
  }
  return kUsage;
}
