#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "rational.hpp"

namespace germfold {

// Positive integer weights sorted ascending with gcd 1, plus the 1-based
// indices where each equal-weight group ends (the last entry is N).
struct WeightSystem {
  std::vector<int> omega;
  std::vector<int> group_ends;
  bool normalized = false;  // set when a common gcd > 1 was divided out

  int nvars() const { return static_cast<int>(omega.size()); }
  int omega_min() const { return omega.front(); }
  int omega_max() const { return omega.back(); }
  // Second-smallest weight (equals omega_min when the first group has >= 2
  // variables); used by the Lipschitz/C1 threshold comparisons.
  int omega_second() const {
    return nvars() > 1 ? omega[1] : omega[0];
  }
  // End (1-based) of the group containing variable j (0-based).
  int group_end_of(int j) const {
    for (int e : group_ends)
      if (j < e) return e;
    return group_ends.back();
  }
  // Group ends r_1..r_k that define the coordinate flag (the full set of
  // variables is excluded).
  std::vector<int> flag_ends() const {
    return {group_ends.begin(), group_ends.end() - 1};
  }
};

WeightSystem make_weight_system(const std::vector<int>& raw);

Eigen::VectorXd polar_fwd(const Eigen::VectorXd& s, double t,
                          const WeightSystem& ws);

// Inverse of the weighted polar map: bracketed bisection on the strictly
// decreasing g(t) = sum x_i^2 / t^{2 w_i} - 1, then Newton polish.
std::pair<Eigen::VectorXd, double> polar_inv(const Eigen::VectorXd& x,
                                             const WeightSystem& ws,
                                             double tol = 1e-12);

// Deterministic isotropic unit vectors; splittable by index.
std::vector<Eigen::VectorXd> sample_sphere(int n, int dim, std::uint64_t seed);
Eigen::VectorXd sample_sphere_one(int dim, std::uint64_t seed,
                                  std::uint64_t index);

// Exact rational points on the unit sphere: all signed coordinate
// directions plus Pythagorean pairs on the requested coordinate pairs
// (all pairs when none are given).
std::vector<std::vector<Rational>> rational_sphere_points(
    int dim, const std::vector<std::pair<int, int>>& axis_pairs = {});

using ArcFn = std::function<Eigen::VectorXd(double)>;

struct TordEstimate {
  double slope = 0.0;
  bool at_cap = false;  // difference below measurement floor on whole grid
  double cap = 0.0;     // largest slope measurable at the tolerance
};

// Tangency order estimate: least-squares slope of log|arc1 - arc2| against
// log of arclength, both arcs reparametrized to a common arclength grid.
TordEstimate estimate_tord(const ArcFn& arc1, const ArcFn& arc2,
                           const std::vector<double>& t_grid = {});

std::vector<double> log_grid(double t_hi, double t_lo, int n);

}  // namespace germfold
