#pragma once

#include <optional>
#include <vector>

#include "wpolynomial.hpp"

namespace germfold {

// Truncated power series in t: coefficient m holds the t^m term,
// valid through t^trunc.
class TSeries {
 public:
  explicit TSeries(int trunc) : c_(static_cast<size_t>(trunc) + 1, 0.0) {}

  static TSeries constant(double v, int trunc) {
    TSeries s(trunc);
    s.c_[0] = v;
    return s;
  }
  static TSeries monomial(double v, int power, int trunc) {
    TSeries s(trunc);
    if (power <= trunc) s.c_[power] = v;
    return s;
  }

  int trunc() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int m) const { return c_[m]; }
  double& coeff(int m) { return c_[m]; }
  const std::vector<double>& coeffs() const { return c_; }

  double max_abs() const;

 private:
  std::vector<double> c_;
};

inline constexpr double kDefaultSeriesTol = 1e-9;
inline constexpr int kDefaultTrunc = 12;

// Ring arithmetic; result truncation is the minimum of the inputs.
TSeries ts_add(const TSeries& a, const TSeries& b);
TSeries ts_sub(const TSeries& a, const TSeries& b);
TSeries ts_mul(const TSeries& a, const TSeries& b);
TSeries ts_scale(const TSeries& a, double r);

// Multiplies by t^m. For m < 0 the dropped leading coefficients must vanish
// within tol_shift (absolute); the truncation shrinks to K - |m|.
TSeries ts_shift(const TSeries& a, int m, double tol_shift = kDefaultSeriesTol);

// Multiplies by t^m (m >= 0) while keeping the stated truncation.
TSeries ts_shift_up_capped(const TSeries& a, int m, int trunc);

// Least m with |coeff_m| > tol * max(1, max|coeff|); nullopt means "> K".
std::optional<int> ts_ord(const TSeries& a, double tol = kDefaultSeriesTol);

// Series division after removing the common leading zero block of b.
TSeries ts_div(const TSeries& a, const TSeries& b,
               double tol = kDefaultSeriesTol);

// Exact truncated composition p(args[0](t), ..., args[n-1](t)).
TSeries ts_compose_poly(const WPolynomial& p, const std::vector<TSeries>& args);

// a(g(t)) for g with zero constant term.
TSeries ts_substitute(const TSeries& a, const TSeries& g);

TSeries ts_pow(const TSeries& a, unsigned e);

// n-th root of a series with positive constant term (Newton iteration).
TSeries ts_nth_root(const TSeries& a, unsigned n);

double ts_eval(const TSeries& a, double t);

// Evaluation with a geometric tail bound extrapolated from the last three
// coefficient magnitudes. Returns false in *tail_ok when the tail cannot be
// bounded at this t; *tail_abs receives the bound.
double ts_eval_tail_guard(const TSeries& a, double t, bool* tail_ok,
                          double* tail_abs);

}  // namespace germfold
