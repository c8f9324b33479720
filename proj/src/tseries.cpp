#include "tseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace germfold {

double TSeries::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

static int common_trunc(const TSeries& a, const TSeries& b) {
  return std::min(a.trunc(), b.trunc());
}

TSeries ts_add(const TSeries& a, const TSeries& b) {
  TSeries r(common_trunc(a, b));
  for (int m = 0; m <= r.trunc(); ++m) r.coeff(m) = a[m] + b[m];
  return r;
}

TSeries ts_sub(const TSeries& a, const TSeries& b) {
  TSeries r(common_trunc(a, b));
  for (int m = 0; m <= r.trunc(); ++m) r.coeff(m) = a[m] - b[m];
  return r;
}

TSeries ts_mul(const TSeries& a, const TSeries& b) {
  TSeries r(common_trunc(a, b));
  for (int i = 0; i <= r.trunc(); ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; i + j <= r.trunc(); ++j) r.coeff(i + j) += a[i] * b[j];
  }
  return r;
}

TSeries ts_scale(const TSeries& a, double r) {
  TSeries out(a.trunc());
  for (int m = 0; m <= a.trunc(); ++m) out.coeff(m) = a[m] * r;
  return out;
}

TSeries ts_shift(const TSeries& a, int m, double tol_shift) {
  if (m == 0) return a;
  if (m > 0) {
    TSeries r(a.trunc() + m);
    for (int i = 0; i <= a.trunc(); ++i) r.coeff(i + m) = a[i];
    return r;
  }
  int k = -m;
  if (k > a.trunc())
    fail(errc::validation, "NonVanishingLeadingCoefficients",
         "shift exceeds truncation");
  for (int i = 0; i < k; ++i) {
    if (std::abs(a[i]) > tol_shift)
      fail(errc::validation, "NonVanishingLeadingCoefficients",
           "coefficient of t^" + std::to_string(i) + " is " +
               std::to_string(a[i]));
  }
  TSeries r(a.trunc() - k);
  for (int i = 0; i <= r.trunc(); ++i) r.coeff(i) = a[i + k];
  return r;
}

TSeries ts_shift_up_capped(const TSeries& a, int m, int trunc) {
  TSeries r(trunc);
  for (int i = 0; i <= a.trunc() && i + m <= trunc; ++i) r.coeff(i + m) = a[i];
  return r;
}

std::optional<int> ts_ord(const TSeries& a, double tol) {
  double scale = std::max(1.0, a.max_abs());
  for (int m = 0; m <= a.trunc(); ++m)
    if (std::abs(a[m]) > tol * scale) return m;
  return std::nullopt;
}

TSeries ts_div(const TSeries& a, const TSeries& b, double tol) {
  auto ob = ts_ord(b, tol);
  if (!ob)
    fail(errc::validation, "DegenerateDenominator", "denominator vanishes");
  auto oa = ts_ord(a, tol);
  int k = *ob;
  if (oa && *oa < k)
    fail(errc::validation, "DegenerateDenominator",
         "denominator order exceeds numerator order");
  TSeries an = ts_shift(a, -k, tol * std::max(1.0, a.max_abs()));
  TSeries bn = ts_shift(b, -k, tol * std::max(1.0, b.max_abs()));
  int K = common_trunc(an, bn);
  TSeries q(K);
  double b0 = bn[0];
  for (int m = 0; m <= K; ++m) {
    double acc = an[m];
    for (int i = 0; i < m; ++i) acc -= q[i] * bn[m - i];
    q.coeff(m) = acc / b0;
  }
  return q;
}

TSeries ts_compose_poly(const WPolynomial& p, const std::vector<TSeries>& args) {
  if (static_cast<int>(args.size()) != p.nvars())
    fail(errc::bad_argument, "DimensionMismatch",
         "composition arity vs polynomial nvars");
  int K = kDefaultTrunc;
  if (!args.empty()) {
    K = args[0].trunc();
    for (const auto& a : args) K = std::min(K, a.trunc());
  }
  // Power cache per argument, filled on demand.
  std::vector<std::vector<TSeries>> pows(args.size());
  auto arg_pow = [&](size_t i, unsigned e) -> const TSeries& {
    auto& cache = pows[i];
    if (cache.empty()) cache.push_back(TSeries::constant(1.0, K));
    while (cache.size() <= e) {
      TSeries trimmed(K);
      for (int m = 0; m <= K; ++m) trimmed.coeff(m) = args[i][m];
      cache.push_back(ts_mul(cache.back(), trimmed));
    }
    return cache[e];
  };
  TSeries acc(K);
  for (const auto& [mono, c] : p.terms()) {
    TSeries term = TSeries::constant(to_double(c), K);
    for (size_t i = 0; i < args.size(); ++i)
      if (mono[i] > 0) term = ts_mul(term, arg_pow(i, mono[i]));
    acc = ts_add(acc, term);
  }
  return acc;
}

TSeries ts_substitute(const TSeries& a, const TSeries& g) {
  if (g[0] != 0.0)
    fail(errc::bad_argument, "SubstitutionNeedsPositiveOrder",
         "inner series has nonzero constant term");
  int K = common_trunc(a, g);
  TSeries acc = TSeries::constant(a[0], K);
  TSeries gp = TSeries::constant(1.0, K);
  for (int m = 1; m <= K; ++m) {
    gp = ts_mul(gp, g);
    if (a[m] != 0.0) acc = ts_add(acc, ts_scale(gp, a[m]));
  }
  return acc;
}

TSeries ts_pow(const TSeries& a, unsigned e) {
  TSeries acc = TSeries::constant(1.0, a.trunc());
  TSeries b = a;
  while (e > 0) {
    if (e & 1U) acc = ts_mul(acc, b);
    b = ts_mul(b, b);
    e >>= 1U;
  }
  return acc;
}

TSeries ts_nth_root(const TSeries& a, unsigned n) {
  if (n == 0) fail(errc::bad_argument, "ZerothRoot");
  if (a[0] <= 0.0)
    fail(errc::bad_argument, "RootNeedsPositiveLeadingTerm",
         "constant term " + std::to_string(a[0]));
  int K = a.trunc();
  TSeries y = TSeries::constant(std::pow(a[0], 1.0 / n), K);
  // Newton doubles the t-adic agreement each round.
  int rounds = 2;
  for (int k = 1; k < K + 1; k *= 2) ++rounds;
  for (int it = 0; it < rounds; ++it) {
    TSeries yn1 = ts_pow(y, n - 1);
    TSeries res = ts_sub(ts_mul(yn1, y), a);
    TSeries corr = ts_div(res, ts_scale(yn1, static_cast<double>(n)), 1e-300);
    y = ts_sub(y, corr);
  }
  return y;
}

double ts_eval(const TSeries& a, double t) {
  double acc = 0.0;
  for (int m = a.trunc(); m >= 0; --m) acc = acc * t + a[m];
  return acc;
}

double ts_eval_tail_guard(const TSeries& a, double t, bool* tail_ok,
                          double* tail_abs) {
  double v = ts_eval(a, t);
  int K = a.trunc();
  double q = 0.0;
  if (K >= 2) {
    double c0 = std::abs(a[K - 2]), c1 = std::abs(a[K - 1]), c2 = std::abs(a[K]);
    if (c0 > 0.0) q = std::max(q, c1 / c0);
    if (c1 > 0.0) q = std::max(q, c2 / c1);
  }
  double last = K >= 0 ? std::abs(a[K]) : 0.0;
  bool ok = true;
  double tail = 0.0;
  if (last > 0.0) {
    double qt = q * t;
    if (qt >= 0.99) {
      ok = false;
      tail = std::numeric_limits<double>::infinity();
    } else {
      tail = last * std::pow(t, K) * qt / (1.0 - qt);
    }
  }
  if (tail_ok) *tail_ok = ok;
  if (tail_abs) *tail_abs = tail;
  return v;
}

}  // namespace germfold
