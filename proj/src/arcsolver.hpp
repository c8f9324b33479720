#pragma once

#include <Eigen/Dense>

#include <vector>

#include "obstruction.hpp"
#include "tseries.hpp"

namespace germfold {

// A solved deformed arc gamma(t) = t^w (s + eps t^delta h(t)).
struct DeformedArc {
  Eigen::VectorXd s;
  double eps = 0.0;
  int k_eff = kDefaultTrunc;
  long long delta = 0;              // effective order gap used by the solver
  std::vector<TSeries> z;           // c unknowns, internal truncation
  std::vector<TSeries> h;           // N ansatz components
  std::vector<TSeries> gamma;       // N arc components, common truncation
  int residual_ord = 0;             // certified order of the equation residual
  bool residual_beyond = false;     // residual vanishes through the truncation
  double t_max = 0.0;

  Eigen::VectorXd eval(double t) const;
};

// Ansatz h_j = (sum_{i <= groupEnd(j)} s_i^2) (d_j f_p |_s)^T z.
std::vector<TSeries> ansatz_h(const GermSystem& gs, const Eigen::VectorXd& s,
                              const std::vector<TSeries>& z);

// Left side of the tau-extended implicit-function equation at z:
// (tau + detA) z + A^vee [(F(z) - A z) + G(z)], truncated at K.
std::vector<TSeries> assemble_residual(const GermSystem& gs,
                                       const Eigen::VectorXd& s, double eps,
                                       const std::vector<TSeries>& z, int K);

DeformedArc solve_arc(const GermSystem& gs, const Eigen::VectorXd& s,
                      double eps, int k_eff = kDefaultTrunc,
                      double obstruction_tol = kObstructionTol);

// Minimal t-order of (f_p + eps f_gt) composed with gamma. Only valid on
// Link[X_o]; off-link points raise NotOnLink.
int arc_residual_order(const GermSystem& gs, const DeformedArc& arc,
                       double tol = 1e-8);

// Largest grid t with componentwise |eps| t^delta |h_j|(t) < 1/2, the
// truncated series evaluated with absolute coefficients and a geometric
// tail guard.
double estimate_t_max(const DeformedArc& arc);

// Contraction bound for the same-order mode: 0.5 (tau + detA) / L with L a
// sampled Lipschitz estimate of the nonlinear part over the iteration ball.
double epsilon_max_same_order(const GermSystem& gs, const Eigen::VectorXd& s);

}  // namespace germfold
