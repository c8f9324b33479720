#include "obstruction.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "smallmat.hpp"

namespace germfold {

long long GermSystem::p_max() const {
  long long m = 0;
  for (long long p : degrees) m = std::max(m, p);
  return m;
}

GermSystem build_germ_system(const WeightSystem& ws,
                             std::vector<WPolynomial> f_p,
                             std::vector<WPolynomial> f_gt) {
  if (f_p.empty()) fail(errc::validation, "NoEquations");
  if (f_p.size() != f_gt.size())
    fail(errc::validation, "LengthMismatch",
         "equations vs perturbations count");
  if (static_cast<int>(f_p.size()) > ws.nvars())
    fail(errc::validation, "TooManyEquations",
         "codimension exceeds variable count");
  GermSystem gs;
  gs.ws = ws;
  const int n = ws.nvars();
  for (size_t i = 0; i < f_p.size(); ++i) {
    if (f_p[i].nvars() != n || f_gt[i].nvars() != n)
      fail(errc::validation, "NvarsMismatch", "equation " + std::to_string(i + 1));
    if (f_p[i].is_zero())
      fail(errc::validation, "ZeroEquation", "equation " + std::to_string(i + 1));
    auto [homog, deg] = is_weighted_homogeneous(f_p[i], ws.omega);
    if (!homog)
      fail(errc::validation, "NotWeightedHomogeneous",
           "equation " + std::to_string(i + 1));
    if (!in_maximal_ideal_power(f_p[i], 2))
      fail(errc::validation, "NotInSquaredMaximalIdeal",
           "equation " + std::to_string(i + 1));
    gs.degrees.push_back(*deg);
  }
  std::optional<long long> delta;
  for (size_t i = 0; i < f_gt.size(); ++i) {
    auto w = word(f_gt[i], ws.omega);
    if (!w) continue;  // zero perturbation: order infinity
    long long gap = *w - gs.degrees[i];
    if (gap < 0)
      fail(errc::validation, "PerturbationOrderTooLow",
           "perturbation " + std::to_string(i + 1) + " has order " +
               std::to_string(*w) + " < " + std::to_string(gs.degrees[i]));
    if (!delta || gap < *delta) delta = gap;
  }
  gs.delta = delta;
  gs.mode = (delta && *delta == 0) ? GermSystem::Mode::same_order
                                   : GermSystem::Mode::higher_order;
  gs.f_p = std::move(f_p);
  gs.f_gt = std::move(f_gt);
  return gs;
}

Eigen::VectorXd group_factors(const WeightSystem& ws,
                              const Eigen::VectorXd& s) {
  std::vector<double> prefix(ws.nvars() + 1, 0.0);
  for (int i = 0; i < ws.nvars(); ++i) prefix[i + 1] = prefix[i] + s[i] * s[i];
  Eigen::VectorXd f(ws.nvars());
  for (int i = 0; i < ws.nvars(); ++i) f[i] = prefix[ws.group_end_of(i)];
  return f;
}

Eigen::MatrixXd rescaled_gradient(const GermSystem& gs,
                                  const Eigen::VectorXd& s) {
  const int n = gs.nvars(), c = gs.codim();
  if (s.size() != n) fail(errc::bad_argument, "DimensionMismatch");
  Eigen::VectorXd gf = group_factors(gs.ws, s);
  std::vector<double> pt(s.data(), s.data() + n);
  Eigen::MatrixXd m(c, n);
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = std::sqrt(std::max(0.0, gf[j])) *
                eval_poly(diff_poly(gs.f_p[i], j), pt);
  return m;
}

static SmallMat<double> to_smallmat(const Eigen::MatrixXd& m) {
  SmallMat<double> a(m.rows(), std::vector<double>(m.cols(), 0.0));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  return a;
}

GramResult gram_and_adjugate(const Eigen::MatrixXd& m) {
  const int c = static_cast<int>(m.rows());
  if (m.cols() < c) fail(errc::bad_argument, "WideMatrixRequired");
  GramResult r;
  r.gram = m * m.transpose();
  SmallMat<double> a = to_smallmat(r.gram);
  double det_cof = smallmat_det(a);
  double det_cb = cauchy_binet_sum(to_smallmat(m));
  double scale = std::max({1e-300, std::abs(det_cof), std::abs(det_cb)});
  if (std::abs(det_cof - det_cb) > 1e-10 * scale)
    fail(errc::no_convergence, "CauchyBinetMismatch",
         "cofactor " + std::to_string(det_cof) + " vs Cauchy-Binet " +
             std::to_string(det_cb));
  r.det = det_cb;
  SmallMat<double> adj = smallmat_adjugate(a);
  r.adjugate.resize(c, c);
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) r.adjugate(i, j) = adj[i][j];
  return r;
}

double tau(const GermSystem& gs, const Eigen::VectorXd& s) {
  std::vector<double> pt(s.data(), s.data() + s.size());
  double acc = 0.0;
  for (const auto& f : gs.f_p) {
    double v = eval_poly(f, pt);
    acc += v * v;
  }
  return acc;
}

double obstruction_coefficient(const GermSystem& gs,
                               const Eigen::VectorXd& s) {
  try {
    GramResult g = gram_and_adjugate(rescaled_gradient(gs, s));
    return tau(gs, s) + g.det;
  } catch (const Error& e) {
    if (e.name() != "CauchyBinetMismatch") throw;
    // Numeric instability: binary64 coordinates are exact rationals, so the
    // exact path resolves the value.
    std::vector<Rational> rs;
    rs.reserve(s.size());
    for (int i = 0; i < s.size(); ++i) rs.emplace_back(s[i]);
    return to_double(obstruction_coefficient_exact(gs, rs));
  }
}

Rational obstruction_coefficient_exact(const GermSystem& gs,
                                       const std::vector<Rational>& s) {
  const int n = gs.nvars(), c = gs.codim();
  if (static_cast<int>(s.size()) != n)
    fail(errc::bad_argument, "DimensionMismatch");
  std::vector<Rational> prefix(n + 1, Rational(0));
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + s[i] * s[i];
  std::vector<Rational> gf(n);
  for (int i = 0; i < n; ++i) gf[i] = prefix[gs.ws.group_end_of(i)];
  // Gradient entries (unscaled) and the exact Gram matrix
  // A(i,k) = sum_j gf_j d_j f_i(s) d_j f_k(s); the square roots pair up.
  SmallMat<Rational> grad(c, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < n; ++j) grad[i][j] = eval_exact(diff_poly(gs.f_p[i], j), s);
  SmallMat<Rational> gram(c, std::vector<Rational>(c, Rational(0)));
  for (int i = 0; i < c; ++i)
    for (int k = 0; k < c; ++k) {
      Rational acc(0);
      for (int j = 0; j < n; ++j) acc += gf[j] * grad[i][j] * grad[k][j];
      gram[i][k] = acc;
    }
  Rational det = smallmat_det(gram);
  Rational t(0);
  for (const auto& f : gs.f_p) {
    Rational v = eval_exact(f, s);
    t += v * v;
  }
  return t + det;
}

bool is_obstructed(const GermSystem& gs, const Eigen::VectorXd& s,
                   double tol) {
  return obstruction_coefficient(gs, s) < tol;
}

// ---------------------------------------------------------------- scanning

static Eigen::VectorXd coefficient_gradient(const GermSystem& gs,
                                            const Eigen::VectorXd& s) {
  const int n = gs.nvars();
  Eigen::VectorXd g(n);
  const double h = 1e-6;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd sp = s, sm = s;
    sp[j] += h;
    sm[j] -= h;
    sp.normalize();
    sm.normalize();
    g[j] = (obstruction_coefficient(gs, sp) - obstruction_coefficient(gs, sm)) /
           (2.0 * h);
  }
  return g;
}

ObstructionReport scan_link(const GermSystem& gs, int n, std::uint64_t seed,
                            double tol) {
  if (n < 1) fail(errc::bad_argument, "NonPositiveSampleCount");
  ObstructionReport rep;
  rep.samples = n;
  rep.seed = seed;
  const int dim = gs.nvars();

  std::vector<Eigen::VectorXd> pts = sample_sphere(n, dim, seed);
  std::vector<double> vals(pts.size());
  parallel_for(pts.size(), [&](size_t i) {
    vals[i] = obstruction_coefficient(gs, pts[i]);
  });

  // Exact pass over the rational corpus points.
  for (const auto& rp : rational_sphere_points(dim)) {
    Rational v = obstruction_coefficient_exact(gs, rp);
    if (v == 0) {
      rep.exact_zeros.push_back(rp);
    }
    Eigen::VectorXd sp(dim);
    for (int i = 0; i < dim; ++i) sp[i] = to_double(rp[i]);
    pts.push_back(sp);
    vals.push_back(to_double(v));
  }

  std::vector<size_t> order(pts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return vals[a] < vals[b]; });

  double min_val = vals[order[0]];
  // Projected-gradient descent from the ten smallest probes.
  size_t starts = std::min<size_t>(10, order.size());
  for (size_t k = 0; k < starts; ++k) {
    Eigen::VectorXd s = pts[order[k]];
    double v = vals[order[k]];
    double step = 0.1;
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXd g = coefficient_gradient(gs, s);
      g -= g.dot(s) * s;  // tangent projection
      double gn = g.norm();
      if (gn < 1e-14) break;
      Eigen::VectorXd cand = (s - step * g / gn).normalized();
      double cv = obstruction_coefficient(gs, cand);
      if (cv < v) {
        s = cand;
        v = cv;
        step = std::min(0.1, step * 1.5);
      } else {
        step *= 0.5;
        if (step < 1e-12) break;
      }
    }
    if (v < min_val) min_val = v;
    pts.push_back(s);
    vals.push_back(v);
  }

  std::vector<size_t> final_order(pts.size());
  for (size_t i = 0; i < final_order.size(); ++i) final_order[i] = i;
  std::sort(final_order.begin(), final_order.end(),
            [&](size_t a, size_t b) { return vals[a] < vals[b]; });
  for (size_t i = 0; i < std::min<size_t>(10, final_order.size()); ++i) {
    rep.witness_points.push_back(pts[final_order[i]]);
    rep.witness_values.push_back(vals[final_order[i]]);
  }
  rep.min_coeff = vals[final_order[0]];

  if (!rep.exact_zeros.empty() || rep.min_coeff < tol * tol)
    rep.verdict = "sigma_nontrivial";
  else if (rep.min_coeff >= tol)
    rep.verdict = "sigma_trivial";
  else
    rep.verdict = "inconclusive";
  return rep;
}

std::vector<Eigen::VectorXd> find_link_points(const GermSystem& gs, int count,
                                              std::uint64_t seed,
                                              double obstruction_tol) {
  const int n = gs.nvars(), c = gs.codim();
  std::vector<double> pt(n);
  std::vector<Eigen::VectorXd> out;
  std::uint64_t index = 0;
  int attempts = 0;
  const int max_attempts = count * 200;
  while (static_cast<int>(out.size()) < count && attempts++ < max_attempts) {
    Eigen::VectorXd s = sample_sphere_one(n, seed ^ 0x5bf03635ULL, index++);
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      for (int i = 0; i < n; ++i) pt[i] = s[i];
      Eigen::VectorXd f(c);
      for (int i = 0; i < c; ++i) f[i] = eval_poly(gs.f_p[i], pt);
      if (f.lpNorm<Eigen::Infinity>() < 1e-14) {
        ok = true;
        break;
      }
      Eigen::MatrixXd jac(c, n);
      for (int i = 0; i < c; ++i)
        for (int j = 0; j < n; ++j)
          jac(i, j) = eval_poly(diff_poly(gs.f_p[i], j), pt);
      // project rows to the tangent space, then least-squares step
      for (int i = 0; i < c; ++i) {
        double d = jac.row(i).dot(s);
        jac.row(i) -= d * s.transpose();
      }
      Eigen::VectorXd step =
          jac.completeOrthogonalDecomposition().solve(f);
      if (!step.allFinite() || step.norm() > 2.0) break;
      s = (s - step).normalized();
    }
    if (!ok) continue;
    if (obstruction_coefficient(gs, s) < obstruction_tol) continue;
    out.push_back(s);
  }
  return out;
}

int regular_sequence_rank_flags(const GermSystem& gs, int samples,
                                std::uint64_t seed) {
  auto pts = find_link_points(gs, samples, seed, 0.0);
  int flags = 0;
  std::vector<double> pt(gs.nvars());
  for (const auto& s : pts) {
    for (int i = 0; i < gs.nvars(); ++i) pt[i] = s[i];
    Eigen::MatrixXd jac(gs.codim(), gs.nvars());
    for (int i = 0; i < gs.codim(); ++i)
      for (int j = 0; j < gs.nvars(); ++j)
        jac(i, j) = eval_poly(diff_poly(gs.f_p[i], j), pt);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto& sv = svd.singularValues();
    if (sv.size() < gs.codim() || sv[gs.codim() - 1] < 1e-8) ++flags;
  }
  return flags;
}

}  // namespace germfold
