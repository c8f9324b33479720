#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "arcsolver.hpp"

namespace germfold {

// Solved arc plus the series actually evaluated by the point map. When the
// lowest weight group is a single variable the arc is reparametrized so the
// first coordinate stays undeformed; this realizes the sharper Jacobian
// bound t^{delta + w_2 - w_N} instead of t^{delta + w_1 - w_N}.
struct ArcBundle {
  DeformedArc arc;
  std::vector<TSeries> psi_gamma;
};

// The contact homeomorphism Psi_eps: gamma_s(t) -> gamma_{eps,s}(t),
// evaluated arc-wise with a concurrent cache keyed by rounded s.
class PsiMap {
 public:
  PsiMap(const GermSystem& gs, double eps, int k_eff = kDefaultTrunc,
         double tol = 1e-9);

  Eigen::VectorXd map(const Eigen::VectorXd& x) const;
  Eigen::VectorXd inverse(const Eigen::VectorXd& y) const;
  std::shared_ptr<const ArcBundle> arc_at(const Eigen::VectorXd& s) const;

 private:
  // Newton iterates may pass through neighboring arcs whose conservative
  // t_max sits just below the queried radius; grace > 1 relaxes the
  // validity gate for those transient evaluations only.
  Eigen::VectorXd map_with_grace(const Eigen::VectorXd& x, double grace) const;

 public:

  const GermSystem& germ() const { return gs_; }
  double eps() const { return eps_; }

 private:
  const GermSystem& gs_;
  double eps_;
  int k_eff_;
  double tol_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::string, std::shared_ptr<const ArcBundle>>
      cache_;
};

Eigen::MatrixXd jacobian_fd(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& map,
    const Eigen::VectorXd& x, double step);

struct ScaleRow {
  double t = 0.0;
  double jac_norm = 0.0;      // sup operator norm of the forward Jacobian
  double inv_jac_norm = 0.0;  // sup operator norm of the inverse Jacobian
  double j_minus_i = 0.0;     // sup ||J - I||
  double drift = 0.0;         // sup ||Psi(x) - x|| / ||x||
  double u_dev = 0.0;         // sup |u~ - 1| (hypersurface case)
  double u_ratio = 0.0;       // u_dev / t^{w_N}
  double contact_lo = 0.0;    // c > 1: min ||f_p(Psi x)|| / ||f_eps(x)||
  double contact_hi = 0.0;    // c > 1: max of the same ratio
  int skipped = 0;
};

struct TrivializationDiagnostics {
  std::vector<double> scales;  // strictly decreasing
  std::vector<ScaleRow> rows;
  bool lipschitz_ok = false;
  bool c1_ok = false;
  bool bounded_u = false;
  bool c1_u = false;
  bool has_u = false;
  double u_slope = 0.0;
  int n_samples = 0;
  std::uint64_t seed = 0;
};

TrivializationDiagnostics lipschitz_scan(
    const GermSystem& gs, double eps,
    std::vector<double> scales = {1e-1, 1e-2, 1e-3, 1e-4}, int n_samples = 24,
    std::uint64_t seed = 42, int k_eff = kDefaultTrunc);

// num_i(t) = f_p_i(s) + eps t^{-p_i} f_gt_i(t^w s), exact per-monomial shifts.
TSeries contact_numerator_series(const GermSystem& gs, const Eigen::VectorXd& s,
                                 double eps, int i, int K);
// den_i(t) = f_p_i(s + eps t^delta h(t)) along a solved arc.
TSeries contact_denominator_series(const GermSystem& gs,
                                   const DeformedArc& arc, int i, int K);

// The scaling-factor series along the arc through s (hypersurface case):
// u~(s,t) = [f_p(s) + eps t^{-p} f_gt(t^w s)] / f_p(s + eps t^delta h).
TSeries contact_factor_series(const GermSystem& gs, const Eigen::VectorXd& s,
                              double eps, int k_eff = kDefaultTrunc);

// Coefficientwise mismatch of the defining identity of right_trivialize,
// relative to the source-series scale.
double right_trivialize_recomposition_error(const GermSystem& gs,
                                            const Eigen::VectorXd& s,
                                            double eps,
                                            int k_eff = kDefaultTrunc);

// Reparametrization w(s,t) with w(s,0) = 1 realizing U = 1:
// (t w)^p f_p(s + eps (t w)^delta h(t w)) = t^p [f_p(s) + eps t^{-p} f_gt(t^w s)].
TSeries right_trivialize(const GermSystem& gs, const Eigen::VectorXd& s,
                         double eps, int k_eff = kDefaultTrunc);

}  // namespace germfold
