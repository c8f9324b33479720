#include "trivializer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"

namespace germfold {

namespace {

std::string cache_key(const Eigen::VectorXd& s) {
  // s rounded to 1e-12 identifies the arc
  std::ostringstream os;
  for (int i = 0; i < s.size(); ++i)
    os << llround(s[i] * 1e12) << ",";
  return os.str();
}

double opnorm(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0, my = 0;
  size_t n = xs.size();
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace

// Built with exact per-monomial shifts; the constant term reuses the
// composition path so the off-link ratio starts at exactly 1.
TSeries contact_numerator_series(const GermSystem& gs, const Eigen::VectorXd& s,
                                 double eps, int i, int K) {
  std::vector<TSeries> const_args;
  const_args.reserve(gs.nvars());
  for (int j = 0; j < gs.nvars(); ++j)
    const_args.push_back(TSeries::constant(s[j], K));
  TSeries num = ts_compose_poly(gs.f_p[i], const_args);
  if (eps != 0.0) {
    for (const auto& [mono, rc] : gs.f_gt[i].terms()) {
      long long wdeg = 0;
      for (int j = 0; j < gs.nvars(); ++j)
        wdeg += static_cast<long long>(mono[j]) * gs.ws.omega[j];
      long long shift = wdeg - gs.degrees[i];
      if (shift < 0)
        fail(errc::validation, "ShiftPreconditionFailed",
             "perturbation order below p");
      if (shift > K) continue;
      double v = to_double(rc) * eps;
      for (int j = 0; j < gs.nvars(); ++j)
        for (unsigned e = 0; e < mono[j]; ++e) v *= s[j];
      TSeries term = TSeries::monomial(v, static_cast<int>(shift), K);
      num = ts_add(num, term);
    }
  }
  return num;
}

TSeries contact_denominator_series(const GermSystem& gs,
                                   const DeformedArc& arc, int i, int K) {
  std::vector<TSeries> args;
  args.reserve(gs.nvars());
  long long delta = arc.delta;
  for (int j = 0; j < gs.nvars(); ++j) {
    TSeries a = TSeries::constant(arc.s[j], K);
    if (arc.eps != 0.0)
      a = ts_add(a, ts_scale(ts_shift_up_capped(arc.h[j],
                                                static_cast<int>(delta), K),
                             arc.eps));
    args.push_back(std::move(a));
  }
  return ts_compose_poly(gs.f_p[i], args);
}

PsiMap::PsiMap(const GermSystem& gs, double eps, int k_eff, double tol)
    : gs_(gs), eps_(eps), k_eff_(k_eff), tol_(tol) {}

std::shared_ptr<const ArcBundle> PsiMap::arc_at(const Eigen::VectorXd& s) const {
  std::string key = cache_key(s);
  {
    std::shared_lock lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto bundle = std::make_shared<ArcBundle>();
  bundle->arc = solve_arc(gs_, s, eps_, k_eff_);
  const DeformedArc& arc = bundle->arc;
  bool adjust = gs_.ws.group_ends.front() == 1 && s[0] != 0.0 &&
                eps_ != 0.0 && !gs_.perturbation_vanishes() && arc.delta >= 1;
  if (!adjust) {
    bundle->psi_gamma = arc.gamma;
  } else {
    // Reparametrize t so the first coordinate stays t^{w_1} s_1:
    // rho = (1 + (eps/s_1) theta^delta h_1(theta))^{-1/w_1}, theta = t rho.
    int K = arc.h[0].trunc();
    int w1 = gs_.ws.omega[0];
    TSeries inner = ts_add(
        TSeries::constant(1.0, K),
        ts_scale(ts_shift_up_capped(arc.h[0], static_cast<int>(arc.delta), K),
                 eps_ / s[0]));
    TSeries rho = TSeries::constant(1.0, K);
    int sweeps = static_cast<int>((K + arc.delta) / std::max<long long>(1, arc.delta)) + 3;
    for (int it = 0; it < sweeps; ++it) {
      TSeries theta = ts_shift_up_capped(rho, 1, K);
      TSeries inner_theta = ts_substitute(inner, theta);
      TSeries root = ts_nth_root(inner_theta, static_cast<unsigned>(w1));
      TSeries rho_new = ts_div(TSeries::constant(1.0, K), root, 1e-300);
      double d = 0.0;
      for (int m = 0; m <= K; ++m)
        d = std::max(d, std::abs(rho_new[m] - rho[m]));
      rho = rho_new;
      if (d <= 1e-15) break;
    }
    TSeries theta = ts_shift_up_capped(rho, 1, K);
    bundle->psi_gamma.reserve(gs_.nvars());
    bundle->psi_gamma.push_back(TSeries::monomial(s[0], w1, K));
    for (int j = 1; j < gs_.nvars(); ++j)
      bundle->psi_gamma.push_back(ts_substitute(arc.gamma[j], theta));
  }
  std::unique_lock lock(mu_);
  auto [it, inserted] = cache_.emplace(key, bundle);
  return it->second;
}

Eigen::VectorXd PsiMap::map(const Eigen::VectorXd& x) const {
  if (x.norm() == 0.0) return x;
  if (eps_ == 0.0 || gs_.perturbation_vanishes()) return x;
  auto [s, t] = polar_inv(x, gs_.ws);
  auto bundle = arc_at(s);
  if (t > bundle->arc.t_max)
    fail(errc::bad_argument, "OutsideValidityRadius",
         "t = " + std::to_string(t) + " exceeds t_max = " +
             std::to_string(bundle->arc.t_max));
  Eigen::VectorXd y(x.size());
  for (int j = 0; j < x.size(); ++j)
    y[j] = ts_eval(bundle->psi_gamma[j], t);
  return y;
}

Eigen::VectorXd PsiMap::inverse(const Eigen::VectorXd& y) const {
  if (y.norm() == 0.0) return y;
  if (eps_ == 0.0 || gs_.perturbation_vanishes()) return y;
  Eigen::VectorXd x = y;
  double scale = std::max(y.norm(), 1e-300);
  double best_res = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best = x;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd r = map(x) - y;
    double res = r.norm();
    if (res < best_res) {
      best_res = res;
      best = x;
    }
    if (res <= tol_ * scale) return x;
    // Psi is a higher-order deformation of the identity, so the plain
    // residual pull-back is a contraction here.
    x -= r;
  }
  fail(errc::no_convergence, "NoConvergence",
       "inverse residual " + std::to_string(best_res) + " at |y| = " +
           std::to_string(y.norm()));
}

Eigen::MatrixXd jacobian_fd(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& map,
    const Eigen::VectorXd& x, double step) {
  if (step <= 0.0) fail(errc::bad_argument, "NonPositiveStep");
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd jac(n, n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    jac.col(j) = (map(xp) - map(xm)) / (2.0 * step);
  }
  return jac;
}

TrivializationDiagnostics lipschitz_scan(const GermSystem& gs, double eps,
                                         std::vector<double> scales,
                                         int n_samples, std::uint64_t seed,
                                         int k_eff) {
  std::sort(scales.begin(), scales.end(), std::greater<>());
  TrivializationDiagnostics diag;
  diag.scales = scales;
  diag.n_samples = n_samples;
  diag.seed = seed;
  diag.has_u = gs.codim() == 1;

  PsiMap psi(gs, eps, k_eff);
  const int n = gs.nvars();

  std::vector<Eigen::VectorXd> dirs = sample_sphere(n_samples, n, seed);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }

  // Contact-factor series per off-link direction (t-independent).
  std::vector<TSeries> factors;
  if (diag.has_u) {
    for (const auto& s : dirs) {
      std::vector<double> pt(s.data(), s.data() + n);
      if (std::abs(eval_poly(gs.f_p[0], pt)) < 0.1) continue;
      if (is_obstructed(gs, s)) continue;
      factors.push_back(contact_factor_series(gs, s, eps, k_eff));
    }
  }

  auto fwd = [&](const Eigen::VectorXd& x) { return psi.map(x); };
  auto inv = [&](const Eigen::VectorXd& y) { return psi.inverse(y); };

  for (double t : scales) {
    ScaleRow row;
    row.t = t;
    row.contact_lo = std::numeric_limits<double>::infinity();
    double step = std::max(1e-6, 1e-3 * t);
    std::vector<ScaleRow> partial(dirs.size());
    std::vector<int> ok(dirs.size(), 0);
    parallel_for(dirs.size(), [&](size_t k) {
      const auto& s = dirs[k];
      ScaleRow& pr = partial[k];
      pr.contact_lo = std::numeric_limits<double>::infinity();
      try {
        if (is_obstructed(gs, s)) return;
        Eigen::VectorXd x = polar_fwd(s, t, gs.ws);
        Eigen::MatrixXd jac = jacobian_fd(fwd, x, step);
        pr.jac_norm = opnorm(jac);
        pr.j_minus_i = opnorm(jac - Eigen::MatrixXd::Identity(n, n));
        Eigen::VectorXd y = psi.map(x);
        pr.inv_jac_norm = opnorm(jacobian_fd(inv, y, step));
        pr.drift = (y - x).norm() / x.norm();
        if (gs.codim() > 1) {
          std::vector<double> px(x.data(), x.data() + n);
          std::vector<double> py(y.data(), y.data() + n);
          double feps = 0.0, fpsi = 0.0;
          for (int i = 0; i < gs.codim(); ++i) {
            double a = eval_poly(gs.f_p[i], px) +
                       eps * eval_poly(gs.f_gt[i], px);
            double b = eval_poly(gs.f_p[i], py);
            feps += a * a;
            fpsi += b * b;
          }
          if (feps > 1e-280) {
            double q = std::sqrt(fpsi / feps);
            pr.contact_lo = q;
            pr.contact_hi = q;
          }
        }
        ok[k] = 1;
      } catch (const Error&) {
        ok[k] = 0;
      }
    });
    for (size_t k = 0; k < dirs.size(); ++k) {
      if (!ok[k]) {
        ++row.skipped;
        continue;
      }
      row.jac_norm = std::max(row.jac_norm, partial[k].jac_norm);
      row.inv_jac_norm = std::max(row.inv_jac_norm, partial[k].inv_jac_norm);
      row.j_minus_i = std::max(row.j_minus_i, partial[k].j_minus_i);
      row.drift = std::max(row.drift, partial[k].drift);
      if (partial[k].contact_hi > 0.0) {
        row.contact_lo = std::min(row.contact_lo, partial[k].contact_lo);
        row.contact_hi = std::max(row.contact_hi, partial[k].contact_hi);
      }
    }
    for (const auto& f : factors) {
      double dev = std::abs(ts_eval(f, t) - 1.0);
      row.u_dev = std::max(row.u_dev, dev);
    }
    row.u_ratio = row.u_dev / std::pow(t, gs.ws.omega_max());
    diag.rows.push_back(row);
  }

  const auto& first = diag.rows.front();
  const auto& last = diag.rows.back();
  diag.lipschitz_ok =
      last.jac_norm <= 10.0 * std::max(first.jac_norm, 1e-12) &&
      last.inv_jac_norm <= 10.0 * std::max(first.inv_jac_norm, 1e-12);
  bool monotone = true;
  for (size_t i = 1; i < diag.rows.size(); ++i)
    monotone = monotone &&
               diag.rows[i].j_minus_i <= 1.2 * diag.rows[i - 1].j_minus_i + 1e-12;
  diag.c1_ok = monotone && last.j_minus_i <= 0.05;

  if (diag.has_u && !factors.empty()) {
    std::vector<double> lx, ly;
    for (const auto& row : diag.rows)
      if (row.u_dev > 1e-290) {
        lx.push_back(std::log(row.t));
        ly.push_back(std::log(row.u_dev));
      }
    diag.u_slope = lx.size() >= 2 ? lsq_slope(lx, ly) : 0.0;
    double r0 = std::max(first.u_ratio, 1e-290);
    diag.bounded_u = last.u_ratio <= 10.0 * r0;
    diag.c1_u = diag.bounded_u && diag.u_slope >= gs.ws.omega_max() + 0.5;
  }
  return diag;
}

TSeries contact_factor_series(const GermSystem& gs, const Eigen::VectorXd& s,
                              double eps, int k_eff) {
  if (gs.codim() != 1)
    fail(errc::validation, "NotHypersurface",
         "contact factor requires c = 1");
  DeformedArc arc = solve_arc(gs, s, eps, k_eff);
  int K = arc.h[0].trunc();
  if (eps == 0.0 || gs.perturbation_vanishes())
    return TSeries::constant(1.0, K);
  TSeries num = contact_numerator_series(gs, arc.s, eps, 0, K);
  TSeries den = contact_denominator_series(gs, arc, 0, K);
  return ts_div(num, den, 1e-12);
}

TSeries right_trivialize(const GermSystem& gs, const Eigen::VectorXd& s,
                         double eps, int k_eff) {
  if (gs.codim() != 1)
    fail(errc::validation, "NotHypersurface",
         "right trivialization requires c = 1");
  DeformedArc arc = solve_arc(gs, s, eps, k_eff);
  int K = arc.h[0].trunc();
  if (eps == 0.0 || gs.perturbation_vanishes())
    return TSeries::constant(1.0, K);
  std::vector<double> pt(arc.s.data(), arc.s.data() + arc.s.size());
  double fp = eval_poly(gs.f_p[0], pt);
  if (std::abs(fp) <= 1e-9)
    fail(errc::obstructed, "OnLinkUnsupported",
         "|f_p(s)| = " + std::to_string(std::abs(fp)));
  TSeries num = contact_numerator_series(gs, arc.s, eps, 0, K);
  TSeries dser = contact_denominator_series(gs, arc, 0, K);  // D(tau)
  unsigned p = static_cast<unsigned>(gs.degrees[0]);
  long long delta = arc.delta;
  TSeries w = TSeries::constant(1.0, K);
  int sweeps =
      static_cast<int>((K + std::max<long long>(1, delta)) /
                       std::max<long long>(1, delta)) + 6;
  bool converged = false;
  for (int it = 0; it < sweeps; ++it) {
    TSeries theta = ts_shift_up_capped(w, 1, K);
    TSeries d_theta = ts_substitute(dser, theta);
    TSeries ratio = ts_div(num, d_theta, 1e-12);
    TSeries w_new = ts_nth_root(ratio, p);
    double d = 0.0;
    for (int m = 0; m <= K; ++m)
      d = std::max(d, std::abs(w_new[m] - w[m]));
    w = w_new;
    if (d <= 1e-14) {
      converged = true;
      break;
    }
  }
  if (!converged && delta == 0)
    fail(errc::no_convergence, "NoConvergence",
         "reparametrization did not stabilize");
  return w;
}

double right_trivialize_recomposition_error(const GermSystem& gs,
                                            const Eigen::VectorXd& s,
                                            double eps, int k_eff) {
  TSeries w = right_trivialize(gs, s, eps, k_eff);
  DeformedArc arc = solve_arc(gs, s, eps, k_eff);
  int K = w.trunc();
  TSeries num = contact_numerator_series(gs, arc.s, eps, 0, K);
  if (eps == 0.0 || gs.perturbation_vanishes()) {
    // w == 1 and both sides equal f_p(s)
    return 0.0;
  }
  TSeries dser = contact_denominator_series(gs, arc, 0, K);
  TSeries theta = ts_shift_up_capped(w, 1, K);
  // both sides divided by t^p: w^p D(theta) vs num
  TSeries lhs = ts_mul(ts_pow(w, static_cast<unsigned>(gs.degrees[0])),
                       ts_substitute(dser, theta));
  TSeries diff = ts_sub(lhs, num);
  double scale = std::max(1.0, num.max_abs());
  return diff.max_abs() / scale;
}

}  // namespace germfold
