#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "wgeom.hpp"
#include "wpolynomial.hpp"

namespace germfold {

// A weighted-homogeneous regular sequence together with its perturbations
// and the derived order data.
struct GermSystem {
  enum class Mode { higher_order, same_order };

  WeightSystem ws;
  std::vector<WPolynomial> f_p;   // c equations, ws-homogeneous
  std::vector<WPolynomial> f_gt;  // c perturbations (zero polynomials allowed)
  std::vector<long long> degrees;           // p_i = word(f_p[i])
  std::optional<long long> delta;           // nullopt encodes infinity
  Mode mode = Mode::higher_order;

  int nvars() const { return ws.nvars(); }
  int codim() const { return static_cast<int>(f_p.size()); }
  long long p_max() const;
  long long delta_or(long long fallback) const {
    return delta ? *delta : fallback;
  }
  bool perturbation_vanishes() const { return !delta.has_value(); }
};

GermSystem build_germ_system(const WeightSystem& ws,
                             std::vector<WPolynomial> f_p,
                             std::vector<WPolynomial> f_gt);

// Square roots of the cumulative group factors sum_{i<=groupEnd(j)} s_i^2
// scale column j of the gradient matrix.
Eigen::VectorXd group_factors(const WeightSystem& ws, const Eigen::VectorXd& s);

Eigen::MatrixXd rescaled_gradient(const GermSystem& gs,
                                  const Eigen::VectorXd& s);

struct GramResult {
  Eigen::MatrixXd gram;      // A = M M^T
  Eigen::MatrixXd adjugate;  // A^vee, with A^vee A = det(A) I
  double det = 0.0;
};

// Gram/adjugate with the determinant computed twice: cofactor expansion of
// A and the Cauchy-Binet sum of squared c x c minors of M. Disagreement
// beyond 1e-10 relative raises CauchyBinetMismatch.
GramResult gram_and_adjugate(const Eigen::MatrixXd& m);

double tau(const GermSystem& gs, const Eigen::VectorXd& s);
double obstruction_coefficient(const GermSystem& gs, const Eigen::VectorXd& s);
Rational obstruction_coefficient_exact(const GermSystem& gs,
                                       const std::vector<Rational>& s);

inline constexpr double kObstructionTol = 1e-6;

bool is_obstructed(const GermSystem& gs, const Eigen::VectorXd& s,
                   double tol = kObstructionTol);

struct ObstructionReport {
  double min_coeff = 0.0;
  std::vector<Eigen::VectorXd> witness_points;      // sorted by coefficient
  std::vector<double> witness_values;
  std::vector<std::vector<Rational>> exact_zeros;   // verified exactly
  std::string verdict;  // sigma_trivial | sigma_nontrivial | inconclusive
  int samples = 0;
  std::uint64_t seed = 0;
};

ObstructionReport scan_link(const GermSystem& gs, int n, std::uint64_t seed,
                            double tol = kObstructionTol);

// Sphere points with f_p(s) = 0 to near machine precision, found by
// projected Gauss-Newton from random starts; obstructed points are skipped.
std::vector<Eigen::VectorXd> find_link_points(const GermSystem& gs, int count,
                                              std::uint64_t seed,
                                              double obstruction_tol = kObstructionTol);

// Heuristic regular-sequence check: full Jacobian rank at sampled points of
// V(f_p) away from the origin. Returns the number of rank-deficient samples.
int regular_sequence_rank_flags(const GermSystem& gs, int samples,
                                std::uint64_t seed);

}  // namespace germfold
