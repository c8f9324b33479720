#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trivializer.hpp"

namespace germfold {

struct GermOptions {
  int order = kDefaultTrunc;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  std::vector<double> eps_grid = {0.3, 1.0};
  int samples = 2000;
};

// Schema-1 germ definition file.
struct GermDefinition {
  std::string name;
  std::vector<std::string> variables;
  std::vector<int> weights;
  std::vector<std::string> equations;
  std::vector<std::string> perturbations;
  GermOptions options;
};

GermDefinition germ_from_json(const nlohmann::json& j);
GermDefinition germ_from_json_text(const std::string& text);
nlohmann::json germ_to_json(const GermDefinition& def);
GermSystem instantiate(const GermDefinition& def);

// ------------------------------------------------------------------ corpus

struct CorpusEntry {
  GermDefinition def;
  bool sigma_trivial = true;
  std::vector<std::vector<double>> obstructed_axes;  // expected refusals
  std::vector<double> fixed_arc_s;                   // known X_o cap X_eps arc
  std::string note;
};

const std::vector<CorpusEntry>& corpus();
const CorpusEntry* corpus_find(const std::string& name);

// ------------------------------------------------------------- check layer

struct CheckResult {
  std::string name;
  bool pass = false;
  bool skipped = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string comparator;  // ">=", "<=", "=="
  std::string detail;
};

nlohmann::json check_to_json(const CheckResult& c);

CheckResult check_residual_vanishing(const GermSystem& gs, int n_link,
                                     const std::vector<double>& eps_list,
                                     int k_eff, std::uint64_t seed);
CheckResult check_deformation_orders(const GermSystem& gs, double eps,
                                     int n_points, std::uint64_t seed);
CheckResult check_tord_gap(const GermSystem& gs, double eps, int n_points,
                           std::uint64_t seed);
CheckResult check_tangency_iff(const GermSystem& gs, double eps,
                               std::uint64_t seed);
CheckResult check_flag_preservation(const GermSystem& gs, double eps,
                                    std::uint64_t seed);
CheckResult check_fixed_arc(const GermSystem& gs,
                            const std::vector<double>& s_raw);
CheckResult check_eps_smoothness(const GermSystem& gs, std::uint64_t seed);
CheckResult check_solver_idempotence(const GermSystem& gs, double eps,
                                     std::uint64_t seed);
CheckResult check_zero_set_correspondence(const GermSystem& gs, double eps,
                                          int n_points, int k_eff,
                                          std::uint64_t seed);
CheckResult check_psi_roundtrip(const GermSystem& gs, double eps, int n_points,
                                int k_eff, std::uint64_t seed);
CheckResult check_contact_identity(const GermSystem& gs, double eps,
                                   int n_points, std::uint64_t seed);
CheckResult check_contact_factor_order(const GermSystem& gs, double eps,
                                       int n_points, std::uint64_t seed);
CheckResult check_u_decay_slope(const GermSystem& gs, double eps,
                                std::uint64_t seed);
CheckResult check_u_bounded_ratio(const GermSystem& gs, double eps,
                                  std::uint64_t seed);
CheckResult check_right_trivialize(const GermSystem& gs, double eps,
                                   int n_points, std::uint64_t seed);
CheckResult check_cauchy_binet_random(int n, std::uint64_t seed);
CheckResult check_adjugate_exact(int n, std::uint64_t seed);
CheckResult check_eps_zero_collapse(const GermSystem& gs, std::uint64_t seed);
CheckResult check_obstructed_refusal(
    const GermSystem& gs, const std::vector<std::vector<double>>& axes);
CheckResult check_same_order_solves(const GermSystem& gs, double eps,
                                    int n_link, int k_eff, std::uint64_t seed);
CheckResult check_drift(const TrivializationDiagnostics& diag);
CheckResult check_c1_verdict(const GermSystem& gs,
                             const TrivializationDiagnostics& diag);
CheckResult check_contact_ratio_c2(const TrivializationDiagnostics& diag);

// ------------------------------------------------------------ CLI backends

nlohmann::json run_check(const GermDefinition& def, bool rank_check = false);
nlohmann::json run_analyze(const GermDefinition& def, int samples,
                           std::uint64_t seed, double tol);
nlohmann::json run_deform(const GermDefinition& def,
                          const std::vector<double>& s, double eps, int order);
nlohmann::json run_trivialize(const GermDefinition& def, double eps,
                              const std::vector<std::vector<double>>& points,
                              bool scan, bool allow_obstructed,
                              std::uint64_t seed, int samples);
nlohmann::json run_verify(const GermDefinition& def, bool allow_obstructed,
                          std::uint64_t seed);
nlohmann::json run_verify_corpus(bool allow_obstructed, std::uint64_t seed);

std::string diagnostics_csv(const TrivializationDiagnostics& diag);

}  // namespace germfold
