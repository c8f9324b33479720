// germfold CLI: check | analyze | deform | trivialize | verify
//
// Thin shell over the germfold C API; all computation happens inside the
// shared library. Exit codes: 0 pass, 1 property failure, 2 validation
// failure, 3 hypothesis/obstruction, 4 numeric non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "germfold/germfold.h"

using nlohmann::json;

namespace {

struct GermHandle {
  gf_germ* g = nullptr;
  ~GermHandle() { gf_germ_free(g); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    std::exit(GF_VALIDATION_ERROR);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int load_germ(const std::string& path, GermHandle& h) {
  // "corpus:NAME" loads a built-in germ instead of a file.
  if (path.rfind("corpus:", 0) == 0)
    return gf_germ_from_corpus(path.substr(7).c_str(), &h.g);
  std::string text = read_file(path);
  return gf_germ_from_json(text.c_str(), &h.g);
}

[[noreturn]] void die(int status) {
  std::cerr << "error: " << gf_last_error() << "\n";
  std::exit(status);
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  gf_string_free(s);
  return out;
}

void write_json_file(const std::string& path, const std::string& payload) {
  if (path.empty()) return;
  std::ofstream out(path);
  out << payload << "\n";
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void print_verify_summary(const json& rep) {
  auto print_checks = [](const json& checks, const std::string& prefix) {
    for (const auto& c : checks) {
      std::string mark = c.value("skipped", false)
                             ? "SKIP"
                             : (c["pass"].get<bool>() ? "PASS" : "FAIL");
      std::cout << "  [" << mark << "] " << prefix
                << c["name"].get<std::string>();
      if (!c.value("skipped", false))
        std::cout << "  measured=" << c["measured"].dump()
                  << " " << c.value("comparator", "") << " "
                  << c["threshold"].dump();
      if (c.contains("detail"))
        std::cout << "  (" << c["detail"].get<std::string>() << ")";
      std::cout << "\n";
    }
  };
  if (rep.contains("germs")) {
    for (const auto& g : rep["germs"]) {
      std::cout << g["germ"].get<std::string>() << " (delta="
                << g["delta"].dump() << ", " << g["mode"].get<std::string>()
                << ", " << g["obstruction_verdict"].get<std::string>()
                << "):\n";
      print_checks(g["checks"], "");
    }
    std::cout << "global:\n";
    print_checks(rep["global_checks"], "");
  } else {
    std::cout << rep["germ"].get<std::string>() << " (delta="
              << rep["delta"].dump() << ", " << rep["mode"].get<std::string>()
              << ", " << rep["obstruction_verdict"].get<std::string>()
              << "):\n";
    print_checks(rep["checks"], "");
  }
  std::cout << (rep["pass"].get<bool>() ? "all checks passed"
                                        : "CHECKS FAILED")
            << " (" << rep["elapsed_ms"].dump() << " ms)\n";
}

std::string diagnostics_csv_from_report(const json& rep) {
  std::ostringstream os;
  os << "t,jac_norm,inv_jac_norm,j_minus_i,drift,u_dev,u_ratio,contact_lo,"
        "contact_hi,skipped\n";
  for (const auto& r : rep["diagnostics"]["rows"])
    os << r["t"].dump() << "," << r["jac_norm"].dump() << ","
       << r["inv_jac_norm"].dump() << "," << r["j_minus_i"].dump() << ","
       << r["drift"].dump() << "," << r["u_dev"].dump() << ","
       << r["u_ratio"].dump() << "," << r["contact_lo"].dump() << ","
       << r["contact_hi"].dump() << "," << r["skipped"].dump() << "\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"germfold: deformed arc foliations and contact trivialization "
               "of weighted-homogeneous complete intersections"};
  app.require_subcommand(1);

  std::string path, json_path, csv_path, s_text, points_file;
  int order = 12, samples = 2000;
  double eps = 1.0, tol = 1e-6;
  std::uint64_t seed = 42;
  bool use_corpus = false, allow_obstructed = false, scan = false,
       rank_check = false;

  auto add_common = [&](CLI::App* cmd, bool needs_path) {
    if (needs_path)
      cmd->add_option("path", path,
                      "germ definition JSON (or corpus:<name>)")
          ->required();
    cmd->add_option("--json", json_path, "write the JSON report to this file");
    cmd->add_option("--seed", seed, "random seed (default 42)");
  };

  CLI::App* c_check = app.add_subcommand("check", "validate a germ definition");
  add_common(c_check, true);
  c_check->add_flag("--rank-check", rank_check,
                    "sample Jacobian rank on the link (regular-sequence "
                    "heuristic)");

  CLI::App* c_analyze =
      app.add_subcommand("analyze", "scan the sphere for the obstruction locus");
  add_common(c_analyze, true);
  c_analyze->add_option("--samples", samples, "sphere sample count");
  c_analyze->add_option("--tol", tol, "verdict tolerance (default 1e-6)");
  c_analyze->add_option("--csv", csv_path, "dump witness table as CSV");

  CLI::App* c_deform =
      app.add_subcommand("deform", "solve the deformed arc through s");
  add_common(c_deform, true);
  c_deform->add_option("--s", s_text, "sphere point, comma separated")
      ->required();
  c_deform->add_option("--eps", eps, "deformation parameter (default 1)");
  c_deform->add_option("--order", order, "series truncation K (default 12)");

  CLI::App* c_triv = app.add_subcommand(
      "trivialize", "contact-trivialization maps and diagnostics");
  add_common(c_triv, true);
  c_triv->add_option("--eps", eps, "deformation parameter (default 1)");
  c_triv->add_option("--points-file", points_file,
                     "JSON array of points to map through Psi");
  c_triv->add_flag("--scan", scan, "run the Lipschitz/C1 scale scan");
  c_triv->add_option("--samples", samples, "hypothesis-scan sample count");
  c_triv->add_flag("--allow-obstructed", allow_obstructed,
                   "map points even when Sigma is nontrivial");
  c_triv->add_option("--csv", csv_path, "dump scan rows as CSV");

  CLI::App* c_verify =
      app.add_subcommand("verify", "run the property-verification suite");
  c_verify->add_option("path", path, "germ definition JSON (or corpus:<name>)");
  c_verify->add_option("--json", json_path, "write the JSON report here");
  c_verify->add_option("--seed", seed, "random seed (default 42)");
  c_verify->add_flag("--corpus", use_corpus, "verify every built-in germ");
  c_verify->add_flag("--allow-obstructed", allow_obstructed,
                     "include off-horn arc checks for obstructed germs");

  CLI11_PARSE(app, argc, argv);

  json opts;
  opts["seed"] = seed;

  if (*c_check) {
    GermHandle h;
    if (int rc = load_germ(path, h)) die(rc);
    opts["rank_check"] = rank_check;
    char* out = nullptr;
    if (int rc = gf_check(h.g, opts.dump().c_str(), &out)) die(rc);
    json rep = json::parse(take_string(out));
    std::cout << rep["germ"].get<std::string>() << ": p=";
    for (size_t i = 0; i < rep["p"].size(); ++i)
      std::cout << (i ? "," : "") << rep["p"][i].dump();
    std::cout << " delta=" << rep["delta"].dump() << " mode="
              << rep["mode"].get<std::string>() << " groups=(";
    for (size_t i = 0; i < rep["groups"].size(); ++i)
      std::cout << (i ? "," : "") << rep["groups"][i].dump();
    std::cout << ")\n";
    if (rep.contains("rank_deficient_samples"))
      std::cout << "rank-deficient link samples: "
                << rep["rank_deficient_samples"].dump() << "\n";
    write_json_file(json_path, rep.dump(2));
    return GF_OK;
  }

  if (*c_analyze) {
    GermHandle h;
    if (int rc = load_germ(path, h)) die(rc);
    opts["samples"] = samples;
    opts["tol"] = tol;
    char* out = nullptr;
    if (int rc = gf_analyze(h.g, opts.dump().c_str(), &out)) die(rc);
    std::string payload = take_string(out);
    std::cout << payload << "\n";
    write_json_file(json_path, payload);
    if (!csv_path.empty()) {
      json rep = json::parse(payload);
      std::ostringstream os;
      os << "coefficient";
      size_t dim = rep["witnesses"].empty()
                       ? 0
                       : rep["witnesses"][0]["s"].size();
      for (size_t i = 0; i < dim; ++i) os << ",s" << i + 1;
      os << "\n";
      for (const auto& w : rep["witnesses"]) {
        os << w["coefficient"].dump();
        for (const auto& v : w["s"]) os << "," << v.dump();
        os << "\n";
      }
      std::ofstream(csv_path) << os.str();
    }
    return GF_OK;
  }

  if (*c_deform) {
    GermHandle h;
    if (int rc = load_germ(path, h)) die(rc);
    opts["s"] = parse_point(s_text);
    opts["eps"] = eps;
    opts["order"] = order;
    char* out = nullptr;
    if (int rc = gf_deform(h.g, opts.dump().c_str(), &out)) die(rc);
    std::string payload = take_string(out);
    std::cout << payload << "\n";
    write_json_file(json_path, payload);
    return GF_OK;
  }

  if (*c_triv) {
    GermHandle h;
    if (int rc = load_germ(path, h)) die(rc);
    opts["eps"] = eps;
    opts["samples"] = samples;
    opts["allow_obstructed"] = allow_obstructed;
    opts["scan"] = scan || points_file.empty();
    if (!points_file.empty())
      opts["points"] = json::parse(read_file(points_file));
    char* out = nullptr;
    if (int rc = gf_trivialize(h.g, opts.dump().c_str(), &out)) die(rc);
    std::string payload = take_string(out);
    std::cout << payload << "\n";
    write_json_file(json_path, payload);
    if (!csv_path.empty()) {
      json rep = json::parse(payload);
      if (rep.contains("diagnostics"))
        std::ofstream(csv_path) << diagnostics_csv_from_report(rep);
    }
    return GF_OK;
  }

  if (*c_verify) {
    char* out = nullptr;
    int rc = 0;
    if (use_corpus) {
      rc = gf_verify_corpus(opts.dump().c_str(), &out);
    } else {
      if (path.empty()) {
        std::cerr << "error: verify needs a path or --corpus\n";
        return GF_BAD_ARGUMENT;
      }
      GermHandle h;
      if (int lrc = load_germ(path, h)) die(lrc);
      opts["allow_obstructed"] = allow_obstructed;
      rc = gf_verify(h.g, opts.dump().c_str(), &out);
    }
    if (out == nullptr) die(rc);
    json rep = json::parse(take_string(out));
    print_verify_summary(rep);
    write_json_file(json_path, rep.dump(2));
    return rc;
  }

  return GF_BAD_ARGUMENT;
}
