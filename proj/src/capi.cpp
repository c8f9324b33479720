#include "germfold/germfold.h"

#include <cstring>
#include <string>

#include "harness.hpp"

using namespace germfold;
using nlohmann::json;

struct gf_germ {
  GermDefinition def;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int set_error(const Error& e) {
  g_last_error = e.name() + std::string(": ") + e.what();
  return static_cast<int>(e.code());
}

int set_error_generic(const std::exception& e) {
  g_last_error = e.what();
  return GF_INTERNAL_ERROR;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return set_error(e);
  } catch (const json::exception& e) {
    g_last_error = std::string("bad options JSON: ") + e.what();
    return GF_BAD_ARGUMENT;
  } catch (const std::exception& e) {
    return set_error_generic(e);
  }
}

json parse_options(const char* options_json) {
  if (options_json == nullptr || options_json[0] == '\0')
    return json::object();
  json j = json::parse(options_json, nullptr, false);
  if (j.is_discarded())
    fail(errc::bad_argument, "BadOptions", "options must be valid JSON");
  return j;
}

}  // namespace

extern "C" {

const char* gf_version(void) { return "germfold 1.0.0"; }

const char* gf_last_error(void) { return g_last_error.c_str(); }

void gf_string_free(char* s) { delete[] s; }

int gf_germ_from_json(const char* json_text, gf_germ** out) {
  if (json_text == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return GF_BAD_ARGUMENT;
  }
  return guarded([&] {
    GermDefinition def = germ_from_json_text(json_text);
    instantiate(def);  // validate now so the handle is known-good
    *out = new gf_germ{std::move(def)};
    return GF_OK;
  });
}

int gf_germ_from_corpus(const char* name, gf_germ** out) {
  if (name == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return GF_BAD_ARGUMENT;
  }
  const CorpusEntry* entry = corpus_find(name);
  if (entry == nullptr) {
    g_last_error = std::string("unknown corpus germ: ") + name;
    return GF_BAD_ARGUMENT;
  }
  *out = new gf_germ{entry->def};
  return GF_OK;
}

void gf_germ_free(gf_germ* germ) { delete germ; }

int gf_corpus_names(char** json_out) {
  if (json_out == nullptr) {
    g_last_error = "null argument";
    return GF_BAD_ARGUMENT;
  }
  json names = json::array();
  for (const auto& e : corpus()) names.push_back(e.def.name);
  *json_out = dup_string(names.dump());
  return GF_OK;
}

int gf_corpus_definition(const char* name, char** json_out) {
  if (name == nullptr || json_out == nullptr) {
    g_last_error = "null argument";
    return GF_BAD_ARGUMENT;
  }
  const CorpusEntry* entry = corpus_find(name);
  if (entry == nullptr) {
    g_last_error = std::string("unknown corpus germ: ") + name;
    return GF_BAD_ARGUMENT;
  }
  *json_out = dup_string(germ_to_json(entry->def).dump(2));
  return GF_OK;
}

int gf_check(const gf_germ* germ, const char* options_json, char** json_out) {
  if (germ == nullptr || json_out == nullptr) {
    g_last_error = "null argument";
    return GF_BAD_ARGUMENT;
  }
  return guarded([&] {
    json opts = parse_options(options_json);
    bool rank = opts.value("rank_check", false);
    *json_out = dup_string(run_check(germ->def, rank).dump(2));
    return GF_OK;
  });
}

int gf_analyze(const gf_germ* germ, const char* options_json,
               char** json_out) {
  if (germ == nullptr || json_out == nullptr) {
    g_last_error = "null argument";
    return GF_BAD_ARGUMENT;
  }
  return guarded([&] {
    json opts = parse_options(options_json);
    int samples = opts.value("samples", germ->def.options.samples);
    std::uint64_t seed = opts.value("seed", germ->def.options.seed);
    double tol = opts.value("tol", kObstructionTol);
    *json_out =
        dup_string(run_analyze(germ->def, samples, seed, tol).dump(2));
    return GF_OK;
  });
}

int gf_deform(const gf_germ* germ, const char* options_json, char** json_out) {
  if (germ == nullptr || json_out == nullptr) {
    g_last_error = "null argument";
    return GF_BAD_ARGUMENT;
  }
  return guarded([&] {
    json opts = parse_options(options_json);
    if (!opts.contains("s"))
      fail(errc::bad_argument, "BadOptions", "deform requires \"s\"");
    auto s = opts["s"].get<std::vector<double>>();
    double eps = opts.value("eps", 1.0);
    int order = opts.value("order", germ->def.options.order);
    *json_out = dup_string(run_deform(germ->def, s, eps, order).dump(2));
    return GF_OK;
  });
}

int gf_trivialize(const gf_germ* germ, const char* options_json,
                  char** json_out) {
  if (germ == nullptr || json_out == nullptr) {
    g_last_error = "null argument";
    return GF_BAD_ARGUMENT;
  }
  return guarded([&] {
    json opts = parse_options(options_json);
    double eps = opts.value("eps", 1.0);
    bool scan = opts.value("scan", true);
    bool allow = opts.value("allow_obstructed", false);
    std::uint64_t seed = opts.value("seed", germ->def.options.seed);
    int samples = opts.value("samples", germ->def.options.samples);
    std::vector<std::vector<double>> points;
    if (opts.contains("points"))
      points = opts["points"].get<std::vector<std::vector<double>>>();
    *json_out = dup_string(
        run_trivialize(germ->def, eps, points, scan, allow, seed, samples)
            .dump(2));
    return GF_OK;
  });
}

int gf_verify(const gf_germ* germ, const char* options_json, char** json_out) {
  if (germ == nullptr || json_out == nullptr) {
    g_last_error = "null argument";
    return GF_BAD_ARGUMENT;
  }
  return guarded([&] {
    json opts = parse_options(options_json);
    std::uint64_t seed = opts.value("seed", germ->def.options.seed);
    bool allow = opts.value("allow_obstructed", false);
    json rep = run_verify(germ->def, allow, seed);
    *json_out = dup_string(rep.dump(2));
    if (!rep["pass"].get<bool>()) {
      g_last_error = "verification checks failed";
      return static_cast<int>(GF_PROPERTY_FAILURE);
    }
    return static_cast<int>(GF_OK);
  });
}

int gf_verify_corpus(const char* options_json, char** json_out) {
  if (json_out == nullptr) {
    g_last_error = "null argument";
    return GF_BAD_ARGUMENT;
  }
  return guarded([&] {
    json opts = parse_options(options_json);
    std::uint64_t seed = opts.value("seed", 42);
    bool allow = opts.value("allow_obstructed", false);
    json rep = run_verify_corpus(allow, seed);
    *json_out = dup_string(rep.dump(2));
    if (!rep["pass"].get<bool>()) {
      g_last_error = "verification checks failed";
      return static_cast<int>(GF_PROPERTY_FAILURE);
    }
    return static_cast<int>(GF_OK);
  });
}

}  // extern "C"
