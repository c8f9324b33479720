#include "arcsolver.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace germfold {

Eigen::VectorXd DeformedArc::eval(double t) const {
  Eigen::VectorXd x(gamma.size());
  for (size_t j = 0; j < gamma.size(); ++j)
    x[static_cast<int>(j)] = ts_eval(gamma[j], t);
  return x;
}

namespace {

struct RTerm {
  Monomial mono;
  double coef;
};

// Per-point solve context: gradients, Gram data, and the Taylor layers of
// U -> f_p(s + U) - f_p(s) - f_p'|_s(U), grouped by homogeneous degree.
struct ArcContext {
  const GermSystem& gs;
  Eigen::VectorXd s;
  int n, c;
  Eigen::VectorXd gfac;
  Eigen::MatrixXd grads;  // c x N, entries d_j f_i (s)
  Eigen::MatrixXd a_adj;
  double det_a = 0.0, tau_v = 0.0, coeff = 0.0;
  // layers[i][d] holds the degree-d terms (d >= 2) of the shifted equation i
  std::vector<std::map<int, std::vector<RTerm>>> layers;
  int max_layer_deg = 0;

  ArcContext(const GermSystem& g, const Eigen::VectorXd& sp) : gs(g), s(sp) {
    n = gs.nvars();
    c = gs.codim();
    gfac = group_factors(gs.ws, s);
    std::vector<double> pt(s.data(), s.data() + n);
    grads.resize(c, n);
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < n; ++j)
        grads(i, j) = eval_poly(diff_poly(gs.f_p[i], j), pt);
    Eigen::MatrixXd m(c, n);
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = std::sqrt(std::max(0.0, gfac[j])) * grads(i, j);
    GramResult gr = gram_and_adjugate(m);
    a_adj = gr.adjugate;
    det_a = gr.det;
    tau_v = tau(gs, s);
    coeff = tau_v + det_a;
    build_layers(pt);
  }

  void build_layers(const std::vector<double>& pt) {
    layers.resize(c);
    for (int i = 0; i < c; ++i) {
      std::map<Monomial, double> acc;
      for (const auto& [mono, rc] : gs.f_p[i].terms())
        expand_shift(mono, to_double(rc), pt, acc);
      for (const auto& [mono, v] : acc) {
        int deg = 0;
        for (unsigned e : mono) deg += static_cast<int>(e);
        if (deg < 2 || v == 0.0) continue;  // degrees 0 and 1 cancel exactly
        layers[i][deg].push_back({mono, v});
        max_layer_deg = std::max(max_layer_deg, deg);
      }
    }
  }

  // Binomial expansion of coef * prod_j (s_j + U_j)^{e_j} into U-monomials.
  void expand_shift(const Monomial& mono, double coef,
                    const std::vector<double>& pt,
                    std::map<Monomial, double>& acc) const {
    Monomial cur(n, 0);
    expand_rec(mono, 0, coef, pt, cur, acc);
  }

  void expand_rec(const Monomial& mono, int j, double coef,
                  const std::vector<double>& pt, Monomial& cur,
                  std::map<Monomial, double>& acc) const {
    if (j == n) {
      acc[cur] += coef;
      return;
    }
    unsigned e = mono[j];
    // binom(e, k) * s_j^{e-k} * U_j^k
    double binom = 1.0;
    for (unsigned k = 0; k <= e; ++k) {
      double f = binom * std::pow(pt[j], static_cast<double>(e - k));
      cur[j] = k;
      if (f != 0.0 || k == 0) expand_rec(mono, j + 1, coef * f, pt, cur, acc);
      binom = binom * (e - k) / (k + 1.0);
    }
    cur[j] = 0;
  }

  std::vector<TSeries> make_h(const std::vector<TSeries>& z, int K) const {
    std::vector<TSeries> h;
    h.reserve(n);
    for (int j = 0; j < n; ++j) {
      TSeries acc(K);
      for (int i = 0; i < c; ++i) {
        double w = gfac[j] * grads(i, j);
        if (w == 0.0) continue;
        for (int m = 0; m <= K; ++m) acc.coeff(m) += w * z[i][m];
      }
      h.push_back(std::move(acc));
    }
    return h;
  }
};

// Power cache over a fixed argument vector.
struct PowCache {
  const std::vector<TSeries>* args;
  int K;
  std::vector<std::vector<TSeries>> pows;

  PowCache(const std::vector<TSeries>& a, int trunc) : args(&a), K(trunc) {
    pows.resize(a.size());
  }
  const TSeries& get(size_t j, unsigned e) {
    auto& cache = pows[j];
    if (cache.empty()) cache.push_back(TSeries::constant(1.0, K));
    while (cache.size() <= e) cache.push_back(ts_mul(cache.back(), (*args)[j]));
    return cache[e];
  }
};

// F(z) - A z: the degree >= 2 Taylor layers of the u-divided difference,
// each carrying eps^{d-1} t^{delta (d-1)}.
std::vector<TSeries> nonlinear_f(const ArcContext& ctx,
                                 const std::vector<TSeries>& h, double eps,
                                 long long delta, int K) {
  std::vector<TSeries> out(ctx.c, TSeries(K));
  if (eps == 0.0) return out;
  PowCache hp(h, K);
  for (int i = 0; i < ctx.c; ++i) {
    for (const auto& [deg, terms] : ctx.layers[i]) {
      long long shift = delta * (deg - 1);
      if (shift > K) continue;
      double scale = std::pow(eps, deg - 1);
      if (scale == 0.0) continue;
      TSeries layer(K);
      for (const auto& t : terms) {
        TSeries prod = TSeries::constant(t.coef, K);
        for (int j = 0; j < ctx.n; ++j)
          if (t.mono[j] > 0) prod = ts_mul(prod, hp.get(j, t.mono[j]));
        layer = ts_add(layer, prod);
      }
      out[i] = ts_add(out[i], ts_scale(ts_shift_up_capped(layer, static_cast<int>(shift), K), scale));
    }
  }
  return out;
}

// G_i(z) = t^{-p_i - delta} f_gt_i(t^w (s + eps t^delta h)); realized with
// exact per-monomial shifts <m,w> - p_i - delta >= 0.
std::vector<TSeries> perturbation_g(const ArcContext& ctx,
                                    const std::vector<TSeries>& h, double eps,
                                    long long delta, int K) {
  std::vector<TSeries> out(ctx.c, TSeries(K));
  std::vector<TSeries> args;
  args.reserve(ctx.n);
  for (int j = 0; j < ctx.n; ++j) {
    TSeries a = TSeries::constant(ctx.s[j], K);
    if (eps != 0.0) {
      TSeries dh = ts_shift_up_capped(h[j], static_cast<int>(delta), K);
      a = ts_add(a, ts_scale(dh, eps));
    }
    args.push_back(std::move(a));
  }
  PowCache ap(args, K);
  for (int i = 0; i < ctx.c; ++i) {
    for (const auto& [mono, rc] : ctx.gs.f_gt[i].terms()) {
      long long wdeg = 0;
      for (int j = 0; j < ctx.n; ++j)
        wdeg += static_cast<long long>(mono[j]) * ctx.gs.ws.omega[j];
      long long shift = wdeg - ctx.gs.degrees[i] - delta;
      if (shift < 0)
        fail(errc::validation, "ShiftPreconditionFailed",
             "perturbation monomial of order " + std::to_string(wdeg) +
                 " below p+delta");
      if (shift > K) continue;
      TSeries prod = TSeries::constant(to_double(rc), K);
      for (int j = 0; j < ctx.n; ++j)
        if (mono[j] > 0) prod = ts_mul(prod, ap.get(j, mono[j]));
      out[i] = ts_add(out[i], ts_shift_up_capped(prod, static_cast<int>(shift), K));
    }
  }
  return out;
}

std::vector<TSeries> apply_adjugate(const ArcContext& ctx,
                                    const std::vector<TSeries>& v, int K) {
  std::vector<TSeries> out(ctx.c, TSeries(K));
  for (int i = 0; i < ctx.c; ++i)
    for (int k = 0; k < ctx.c; ++k) {
      double w = ctx.a_adj(i, k);
      if (w == 0.0) continue;
      for (int m = 0; m <= K; ++m) out[i].coeff(m) += w * v[k][m];
    }
  return out;
}

Eigen::VectorXd checked_sphere(const Eigen::VectorXd& s) {
  double n = s.norm();
  if (std::abs(n - 1.0) > 1e-6)
    fail(errc::bad_argument, "NotOnSphere",
         "|s| = " + std::to_string(n));
  return s / n;
}

double max_abs_diff(const std::vector<TSeries>& a,
                    const std::vector<TSeries>& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    int K = std::min(a[i].trunc(), b[i].trunc());
    for (int m = 0; m <= K; ++m)
      d = std::max(d, std::abs(a[i][m] - b[i][m]));
  }
  return d;
}

}  // namespace

std::vector<TSeries> ansatz_h(const GermSystem& gs, const Eigen::VectorXd& s,
                              const std::vector<TSeries>& z) {
  if (static_cast<int>(z.size()) != gs.codim())
    fail(errc::bad_argument, "DimensionMismatch", "z length vs codimension");
  ArcContext ctx(gs, s);
  int K = z[0].trunc();
  for (const auto& zi : z) K = std::min(K, zi.trunc());
  return ctx.make_h(z, K);
}

std::vector<TSeries> assemble_residual(const GermSystem& gs,
                                       const Eigen::VectorXd& s, double eps,
                                       const std::vector<TSeries>& z, int K) {
  if (static_cast<int>(z.size()) != gs.codim())
    fail(errc::bad_argument, "DimensionMismatch", "z length vs codimension");
  ArcContext ctx(gs, s);
  long long delta = gs.delta_or(0);
  for (const auto& zi : z) K = std::min(K, zi.trunc());
  std::vector<TSeries> zt;
  for (const auto& zi : z) {
    TSeries t(K);
    for (int m = 0; m <= K; ++m) t.coeff(m) = zi[m];
    zt.push_back(std::move(t));
  }
  std::vector<TSeries> h = ctx.make_h(zt, K);
  std::vector<TSeries> nf = nonlinear_f(ctx, h, eps, delta, K);
  std::vector<TSeries> g = perturbation_g(ctx, h, eps, delta, K);
  for (int i = 0; i < ctx.c; ++i) nf[i] = ts_add(nf[i], g[i]);
  std::vector<TSeries> out = apply_adjugate(ctx, nf, K);
  for (int i = 0; i < ctx.c; ++i)
    out[i] = ts_add(out[i], ts_scale(zt[i], ctx.coeff));
  return out;
}

DeformedArc solve_arc(const GermSystem& gs, const Eigen::VectorXd& s_in,
                      double eps, int k_eff, double obstruction_tol) {
  Eigen::VectorXd s = checked_sphere(s_in);
  ArcContext ctx(gs, s);
  if (ctx.coeff < obstruction_tol)
    fail(errc::obstructed, "Obstructed",
         "obstruction coefficient " + std::to_string(ctx.coeff) +
             " below " + std::to_string(obstruction_tol));

  DeformedArc arc;
  arc.s = s;
  arc.eps = eps;
  arc.k_eff = k_eff;
  long long delta = gs.delta_or(0);
  arc.delta = delta;

  const int n = gs.nvars(), c = gs.codim();
  long long Kz_ll = k_eff + gs.p_max() + delta;
  int Kz = static_cast<int>(Kz_ll);
  int Kg = Kz + gs.ws.omega_min() + static_cast<int>(delta);

  if (eps == 0.0 || gs.perturbation_vanishes()) {
    // Undeformed case: the arc is exactly gamma_s.
    arc.z.assign(c, TSeries(Kz));
    arc.h.assign(n, TSeries(Kz));
    for (int j = 0; j < n; ++j)
      arc.gamma.push_back(TSeries::monomial(s[j], gs.ws.omega[j], Kg));
    arc.residual_ord = Kz + 1;
    arc.residual_beyond = true;
    arc.t_max = estimate_t_max(arc);
    return arc;
  }

  if (gs.mode == GermSystem::Mode::same_order) {
    double emax = epsilon_max_same_order(gs, s);
    if (std::abs(eps) > emax)
      fail(errc::no_convergence, "NoContraction",
           "|eps| = " + std::to_string(std::abs(eps)) +
               " exceeds eps_max = " + std::to_string(emax));
  }

  std::vector<TSeries> z(c, TSeries(Kz));
  int max_sweeps;
  if (delta >= 1)
    max_sweeps = static_cast<int>((Kz_ll + delta) / delta) + 2;
  else
    max_sweeps = 300;
  double first_diff = -1.0;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    std::vector<TSeries> h = ctx.make_h(z, Kz);
    std::vector<TSeries> rhs = nonlinear_f(ctx, h, eps, delta, Kz);
    std::vector<TSeries> g = perturbation_g(ctx, h, eps, delta, Kz);
    for (int i = 0; i < c; ++i) rhs[i] = ts_add(rhs[i], g[i]);
    rhs = apply_adjugate(ctx, rhs, Kz);
    std::vector<TSeries> z_new;
    z_new.reserve(c);
    for (int i = 0; i < c; ++i)
      z_new.push_back(ts_scale(rhs[i], -1.0 / ctx.coeff));
    double diff = max_abs_diff(z_new, z);
    double scale = 1.0;
    for (const auto& zi : z_new) scale = std::max(scale, zi.max_abs());
    z = std::move(z_new);
    if (first_diff < 0) first_diff = diff;
    if (diff <= 1e-14 * scale) {
      converged = true;
      break;
    }
    if (delta == 0 && diff > 1e6 * (first_diff + 1.0))
      fail(errc::no_convergence, "NoContraction",
           "iteration diverges at eps = " + std::to_string(eps));
  }
  if (delta == 0 && !converged)
    fail(errc::no_convergence, "NoContraction",
         "no coefficient-norm convergence in 300 sweeps");

  arc.z = z;
  arc.h = ctx.make_h(z, Kz);
  for (int j = 0; j < n; ++j) {
    TSeries gj = TSeries::monomial(s[j], gs.ws.omega[j], Kg);
    TSeries dh = ts_shift_up_capped(arc.h[j],
                                    gs.ws.omega[j] + static_cast<int>(delta), Kg);
    arc.gamma.push_back(ts_add(gj, ts_scale(dh, eps)));
  }

  // Certify the equation residual order.
  std::vector<TSeries> res = assemble_residual(gs, s, eps, z, Kz);
  int ro = Kz + 1;
  bool beyond = true;
  for (const auto& r : res) {
    auto o = ts_ord(r, 1e-9);
    if (o) {
      beyond = false;
      ro = std::min(ro, *o);
    }
  }
  arc.residual_ord = ro;
  arc.residual_beyond = beyond;
  arc.t_max = estimate_t_max(arc);
  return arc;
}

int arc_residual_order(const GermSystem& gs, const DeformedArc& arc,
                       double tol) {
  std::vector<double> pt(arc.s.data(), arc.s.data() + arc.s.size());
  for (const auto& f : gs.f_p)
    if (std::abs(eval_poly(f, pt)) > tol)
      fail(errc::bad_argument, "NotOnLink",
           "|f_p(s)| = " + std::to_string(std::abs(eval_poly(f, pt))));
  int best = arc.gamma[0].trunc() + 1;
  for (int i = 0; i < gs.codim(); ++i) {
    TSeries r = ts_compose_poly(gs.f_p[i], arc.gamma);
    if (!gs.f_gt[i].is_zero() && arc.eps != 0.0)
      r = ts_add(r, ts_scale(ts_compose_poly(gs.f_gt[i], arc.gamma), arc.eps));
    auto o = ts_ord(r, tol);
    best = std::min(best, o ? *o : r.trunc() + 1);
  }
  return best;
}

double estimate_t_max(const DeformedArc& arc) {
  const double grid_max = 8.0, grid_min = 1e-4;
  if (arc.eps == 0.0) return grid_max;
  std::vector<TSeries> habs;
  habs.reserve(arc.h.size());
  bool all_zero = true;
  for (const auto& hj : arc.h) {
    TSeries a(hj.trunc());
    for (int m = 0; m <= hj.trunc(); ++m) {
      a.coeff(m) = std::abs(hj[m]);
      if (a[m] != 0.0) all_zero = false;
    }
    habs.push_back(std::move(a));
  }
  if (all_zero) return grid_max;
  auto grid = log_grid(grid_max, grid_min, 240);
  for (double t : grid) {  // descending
    bool ok = true;
    for (const auto& hj : habs) {
      bool tail_ok = false;
      double tail = 0.0;
      double v = ts_eval_tail_guard(hj, t, &tail_ok, &tail);
      if (!tail_ok ||
          std::abs(arc.eps) * std::pow(t, static_cast<double>(arc.delta)) *
                  (v + tail) >=
              0.5) {
        ok = false;
        break;
      }
    }
    if (ok) return t;
  }
  return 0.0;
}

double epsilon_max_same_order(const GermSystem& gs, const Eigen::VectorXd& s) {
  ArcContext ctx(gs, s);
  const int c = ctx.c;
  const int K = 4;
  auto phi = [&](const std::vector<TSeries>& z) {
    std::vector<TSeries> h = ctx.make_h(z, K);
    std::vector<TSeries> v = nonlinear_f(ctx, h, 1.0, 0, K);
    std::vector<TSeries> g = perturbation_g(ctx, h, 1.0, 0, K);
    for (int i = 0; i < c; ++i) v[i] = ts_add(v[i], g[i]);
    return apply_adjugate(ctx, v, K);
  };
  std::vector<TSeries> zero(c, TSeries(K));
  std::vector<TSeries> t0 = phi(zero);
  double r0 = 0.0;
  for (const auto& t : t0) r0 = std::max(r0, t.max_abs());
  r0 /= std::max(ctx.coeff, 1e-300);
  double ball = std::min(1.0, 2.0 * r0 + 0.05);
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  auto rnd = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return (static_cast<double>(state >> 11) * 0x1.0p-53 * 2.0 - 1.0) * ball;
  };
  double lip = 1e-12;
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<TSeries> za(c, TSeries(K)), zb(c, TSeries(K));
    double dz = 0.0;
    for (int i = 0; i < c; ++i) {
      double a = rnd(), b = rnd();
      za[i] = TSeries::constant(a, K);
      zb[i] = TSeries::constant(b, K);
      dz = std::max(dz, std::abs(a - b));
    }
    if (dz < 1e-9) continue;
    double dphi = max_abs_diff(phi(za), phi(zb));
    lip = std::max(lip, dphi / dz);
  }
  return std::min(1.0, 0.5 * ctx.coeff / lip);
}

}  // namespace germfold
