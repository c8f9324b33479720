#include "wgeom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace germfold {

WeightSystem make_weight_system(const std::vector<int>& raw) {
  if (raw.empty()) fail(errc::validation, "NonPositiveWeight", "empty weights");
  for (int w : raw)
    if (w < 1) fail(errc::validation, "NonPositiveWeight", std::to_string(w));
  for (size_t i = 1; i < raw.size(); ++i)
    if (raw[i] < raw[i - 1])
      fail(errc::validation, "NotAscending",
           "weights must be non-decreasing (variable order must match)");
  int g = 0;
  for (int w : raw) g = std::gcd(g, w);
  WeightSystem ws;
  ws.normalized = g > 1;
  ws.omega.reserve(raw.size());
  for (int w : raw) ws.omega.push_back(w / g);
  for (size_t i = 0; i < ws.omega.size(); ++i) {
    if (i + 1 == ws.omega.size() || ws.omega[i + 1] != ws.omega[i])
      ws.group_ends.push_back(static_cast<int>(i) + 1);
  }
  return ws;
}

Eigen::VectorXd polar_fwd(const Eigen::VectorXd& s, double t,
                          const WeightSystem& ws) {
  if (s.size() != ws.nvars()) fail(errc::bad_argument, "DimensionMismatch");
  if (t < 0) fail(errc::bad_argument, "NegativeRadius");
  Eigen::VectorXd x(s.size());
  for (int i = 0; i < s.size(); ++i) x[i] = std::pow(t, ws.omega[i]) * s[i];
  return x;
}

std::pair<Eigen::VectorXd, double> polar_inv(const Eigen::VectorXd& x,
                                             const WeightSystem& ws,
                                             double tol) {
  if (x.size() != ws.nvars()) fail(errc::bad_argument, "DimensionMismatch");
  if (x.norm() == 0.0) fail(errc::bad_argument, "OriginInput");
  const int n = ws.nvars();
  auto g = [&](double t) {
    double acc = -1.0;
    for (int i = 0; i < n; ++i) {
      double r = x[i] / std::pow(t, ws.omega[i]);
      acc += r * r;
    }
    return acc;
  };
  // Bracket: at max_i |x_i|^{1/w_i} the largest term alone is already 1,
  // while at sum_i |x_i|^{1/w_i} the terms sum to at most 1.
  double t_lo = 0.0, t_hi = 0.0;
  for (int i = 0; i < n; ++i) {
    double a = std::pow(std::abs(x[i]), 1.0 / ws.omega[i]);
    t_lo = std::max(t_lo, a);
    t_hi += a;
  }
  double a = t_lo, b = t_hi;
  if (g(a) < 0.0) b = a;  // rounding collapsed the bracket
  for (int it = 0; it < 80 && (b - a) > 1e-17 * b; ++it) {
    double mid = 0.5 * (a + b);
    (g(mid) >= 0.0 ? a : b) = mid;
  }
  double t = 0.5 * (a + b);
  for (int it = 0; it < 8; ++it) {  // Newton polish
    double val = g(t);
    double dg = 0.0;
    for (int i = 0; i < n; ++i) {
      double r = x[i] / std::pow(t, ws.omega[i]);
      dg += -2.0 * ws.omega[i] * r * r / t;
    }
    if (dg == 0.0) break;
    double step = val / dg;
    if (!std::isfinite(step)) break;
    t -= step;
    if (std::abs(step) < 1e-16 * t) break;
  }
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s[i] = x[i] / std::pow(t, ws.omega[i]);
  double err = (polar_fwd(s, t, ws) - x).norm();
  if (err > tol * std::max(1e-300, x.norm()) * 10.0 + 1e-290)
    fail(errc::no_convergence, "PolarInverseFailed",
         "residual " + std::to_string(err));
  return {s, t};
}

// -------------------------------------------------------------- sampling

static std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

static double uniform01(std::uint64_t& state) {
  return (splitmix64(state) >> 11) * 0x1.0p-53;
}

Eigen::VectorXd sample_sphere_one(int dim, std::uint64_t seed,
                                  std::uint64_t index) {
  std::uint64_t state = seed ^ (0x2545F4914F6CDD1DULL * (index + 1));
  Eigen::VectorXd v(dim);
  for (;;) {
    for (int i = 0; i < dim; i += 2) {
      // Box-Muller keeps the stream deterministic across platforms.
      double u1 = uniform01(state), u2 = uniform01(state);
      if (u1 < 1e-300) u1 = 1e-300;
      double r = std::sqrt(-2.0 * std::log(u1));
      v[i] = r * std::cos(2.0 * M_PI * u2);
      if (i + 1 < dim) v[i + 1] = r * std::sin(2.0 * M_PI * u2);
    }
    double n = v.norm();
    if (n > 1e-8) return v / n;
  }
}

std::vector<Eigen::VectorXd> sample_sphere(int n, int dim, std::uint64_t seed) {
  if (n < 1) fail(errc::bad_argument, "NonPositiveSampleCount");
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back(sample_sphere_one(dim, seed, static_cast<std::uint64_t>(i)));
  return out;
}

std::vector<std::vector<Rational>> rational_sphere_points(
    int dim, const std::vector<std::pair<int, int>>& axis_pairs) {
  std::vector<std::vector<Rational>> pts;
  for (int i = 0; i < dim; ++i) {
    for (int sgn : {1, -1}) {
      std::vector<Rational> p(dim, Rational(0));
      p[i] = Rational(sgn);
      pts.push_back(p);
    }
  }
  std::vector<std::pair<int, int>> pairs = axis_pairs;
  if (pairs.empty()) {
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) pairs.emplace_back(i, j);
  }
  static const std::pair<int, int> legs[] = {{3, 5}, {4, 5}, {5, 13},
                                             {12, 13}, {8, 17}, {15, 17}};
  for (auto [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= dim || j >= dim || i == j)
      fail(errc::bad_argument, "BadAxisPair");
    for (int k = 0; k < 6; k += 2) {
      Rational a(legs[k].first, legs[k].second);
      Rational b(legs[k + 1].first, legs[k + 1].second);
      for (int sa : {1, -1}) {
        for (int sb : {1, -1}) {
          std::vector<Rational> p(dim, Rational(0));
          p[i] = sa * a;
          p[j] = sb * b;
          pts.push_back(p);
          std::vector<Rational> q(dim, Rational(0));
          q[i] = sa * b;
          q[j] = sb * a;
          pts.push_back(q);
        }
      }
    }
  }
  return pts;
}

// ---------------------------------------------------------- tangency order

std::vector<double> log_grid(double t_hi, double t_lo, int n) {
  std::vector<double> g(n);
  double lh = std::log(t_hi), ll = std::log(t_lo);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(lh + (ll - lh) * i / std::max(1, n - 1));
  return g;
}

namespace {

// Monotone arclength table over a dense log grid, via trapezoidal
// quadrature of the finite-difference speed.
struct LengthTable {
  std::vector<double> t, len;

  void build(const ArcFn& arc, double t_max) {
    const int kDense = 160;
    t = log_grid(t_max, t_max * 1e-6, kDense);
    std::reverse(t.begin(), t.end());  // ascending
    std::vector<double> speed(kDense);
    for (int i = 0; i < kDense; ++i) {
      double h = t[i] * 1e-4;
      speed[i] = (arc(t[i] + h) - arc(t[i] - h)).norm() / (2.0 * h);
    }
    len.assign(kDense, 0.0);
    // Below the first node assume the local power law v ~ a t^q.
    double q = 0.0;
    if (speed[0] > 0 && speed[1] > 0)
      q = std::log(speed[1] / speed[0]) / std::log(t[1] / t[0]);
    q = std::max(q, -0.5);
    len[0] = speed[0] * t[0] / (q + 1.0);
    for (int i = 1; i < kDense; ++i)
      len[i] = len[i - 1] + 0.5 * (speed[i] + speed[i - 1]) * (t[i] - t[i - 1]);
  }

  double t_of_len(double l) const {
    auto it = std::lower_bound(len.begin(), len.end(), l);
    if (it == len.begin()) return t.front() * (l / len.front());
    if (it == len.end()) return t.back();
    size_t j = static_cast<size_t>(it - len.begin());
    double f = std::log(l / len[j - 1]) / std::log(len[j] / len[j - 1]);
    return t[j - 1] * std::pow(t[j] / t[j - 1], f);
  }
};

}  // namespace

TordEstimate estimate_tord(const ArcFn& arc1, const ArcFn& arc2,
                           const std::vector<double>& t_grid) {
  std::vector<double> grid = t_grid.empty() ? log_grid(1e-1, 1e-4, 12) : t_grid;
  double t_max = *std::max_element(grid.begin(), grid.end());
  LengthTable l1, l2;
  l1.build(arc1, t_max);
  l2.build(arc2, t_max);

  std::vector<double> ls, ds;
  double ref_scale = std::max(arc1(t_max).norm(), arc2(t_max).norm());
  const double floor = 1e-13 * std::max(1e-300, ref_scale);
  for (double t : grid) {
    double l = 0.0;
    {
      // arclength of arc1 at t, by the same table
      auto it = std::lower_bound(l1.t.begin(), l1.t.end(), t);
      size_t j = std::min<size_t>(
          std::max<size_t>(1, static_cast<size_t>(it - l1.t.begin())),
          l1.t.size() - 1);
      double f = std::log(t / l1.t[j - 1]) / std::log(l1.t[j] / l1.t[j - 1]);
      l = l1.len[j - 1] * std::pow(l1.len[j] / l1.len[j - 1], f);
    }
    double t1 = l1.t_of_len(l);
    double t2 = l2.t_of_len(l);
    double d = (arc1(t1) - arc2(t2)).norm();
    if (d > floor) {
      ls.push_back(std::log(l));
      ds.push_back(std::log(d));
    }
  }
  TordEstimate out;
  double lmin = *std::min_element(grid.begin(), grid.end());
  out.cap = std::log(floor / std::max(1e-300, ref_scale)) /
            std::log(lmin / std::max(t_max, 1e-300));
  if (ls.size() < 3) {
    out.at_cap = true;
    out.slope = out.cap;
    return out;
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < ls.size(); ++i) {
    mx += ls[i];
    my += ds[i];
  }
  mx /= ls.size();
  my /= ls.size();
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < ls.size(); ++i) {
    sxx += (ls[i] - mx) * (ls[i] - mx);
    sxy += (ls[i] - mx) * (ds[i] - my);
  }
  out.slope = sxy / sxx;
  return out;
}

}  // namespace germfold
