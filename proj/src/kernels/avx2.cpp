#include "fabricplast/kernels.hpp"

#include <experimental/simd>

#include <algorithm>
#include <cmath>

namespace fabricplast::kernels::detail {

namespace {

namespace stdx = std::experimental;
using V = stdx::fixed_size_simd<double, 4>;
using M = V::mask_type;
constexpr std::size_t W = V::size();

V load(std::span<const double> s, std::size_t i) { return V(s.data() + i, stdx::element_aligned); }
void store(const V& v, std::span<double> s, std::size_t i) {
  v.copy_to(s.data() + i, stdx::element_aligned);
}

V f_iso_v(const V& q, const material::ElastoplasticParams& p) {
  return V(p.tau_y) + V(p.A) * stdx::asinh(V(p.a) * q) + V(p.B) * stdx::tanh(V(p.b) * q) +
         V(p.C) * stdx::pow(q, V(p.c));
}

V f_iso_prime_v(const V& q, const material::ElastoplasticParams& p) {
  const V aq = V(p.a) * q;
  const V ch = stdx::cosh(V(p.b) * q);
  return V(p.A * p.a) / stdx::sqrt(V(1.0) + aq * aq) + V(p.B * p.b) * (V(1.0) / (ch * ch)) +
         V(p.C * p.c) * stdx::pow(q, V(p.c - 1.0));
}

bool all_nonnegative(std::span<const double> q) {
  return std::all_of(q.begin(), q.end(), [](double v) { return v >= 0.0; });
}

// Safeguarded Newton on a decreasing residual, lane-parallel. Lanes start
// active where `active` is set; converged lanes are flagged in `conv`.
template <class Residual>
void bracketed_newton(V& x, V& g, V lo, V hi, M active, M& conv, const V& tol, const V& q0,
                      double mu, const material::ElastoplasticParams& p, int max_iter,
                      Residual&& residual) {
  for (int it = 0; it < max_iter && stdx::any_of(active); ++it) {
    stdx::where(active && g > 0.0, lo) = x;
    stdx::where(active && !(g > 0.0), hi) = x;
    const V gp = V(-mu) - f_iso_prime_v(q0 + x, p);
    V xn = x - g / gp;
    stdx::where(!(xn > lo && xn < hi), xn) = V(0.5) * (lo + hi);
    const M stalled = xn == x;
    stdx::where(active, x) = xn;
    const V gn = residual(x);
    stdx::where(active, g) = gn;
    const M done = active && stdx::abs(g) <= tol;
    if (stdx::any_of(done)) {
      // polishing step, as in the scalar path
      stdx::where(done && g > 0.0, lo) = x;
      stdx::where(done && !(g > 0.0), hi) = x;
      const V xp = x - g / (V(-mu) - f_iso_prime_v(q0 + x, p));
      const V gpn = residual(xp);
      const M take = done && xp > lo && xp <= hi && stdx::abs(gpn) <= stdx::abs(g);
      stdx::where(take, x) = xp;
      stdx::where(take, g) = gpn;
    }
    conv = conv || done;
    active = active && !done && !stalled;
  }
}

void return_map_lane(const ReturnMapBatch& b, std::size_t i,
                     const material::ElastoplasticParams& p, const material::NewtonConfig& cfg) {
  const material::PlasticState old{b.phi_p_old[i], b.q_old[i], b.alpha_old[i]};
  const auto r = material::return_map(b.phi_new[i], old, p, cfg);
  b.tau[i] = r.tau;
  b.phi_e[i] = r.phi_e;
  b.phi_p_new[i] = r.new_state.phi_p;
  b.q_new[i] = r.new_state.q;
  b.alpha_new[i] = r.new_state.alpha_p;
  b.dtau_dphi[i] = r.dtau_dphi;
  b.delta_alpha[i] = r.delta_alpha;
  b.plastic[i] = r.is_plastic ? 1 : 0;
}

}  // namespace

void hardening_avx2(std::span<const double> q, const material::ElastoplasticParams& p,
                    std::span<double> f, std::span<double> fprime) {
  if (!all_nonnegative(q)) return hardening_scalar(q, p, f, fprime);
  const std::size_t n = q.size();
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    const V qv = load(q, i);
    store(f_iso_v(qv, p), f, i);
    store(f_iso_prime_v(qv, p), fprime, i);
  }
  if (i < n) hardening_scalar(q.subspan(i), p, f.subspan(i), fprime.subspan(i));
}

void return_map_avx2(const ReturnMapBatch& b, const material::ElastoplasticParams& p,
                     const material::NewtonConfig& cfg) {
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1 || !all_nonnegative(b.q_old))
    return return_map_scalar(b, p, cfg);
  const double mu = p.mu_f;
  const std::size_t n = b.size();
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    const V phi_new = load(b.phi_new, i);
    const V phi_p = load(b.phi_p_old, i);
    const V q = load(b.q_old, i);
    const V alpha = load(b.alpha_old, i);

    const V phi_e_trial = phi_new - phi_p;
    const V tau_trial = V(mu) * phi_e_trial;
    V h(1.0);
    stdx::where(tau_trial < 0.0, h) = V(-1.0);
    const V f_old = f_iso_v(q, p);
    const V abs_tt = h * tau_trial;
    const M plastic = abs_tt - f_old > 0.0;

    V tau = tau_trial, phi_e = phi_e_trial, phi_p_new = phi_p, q_new = q, alpha_new = alpha;
    V dtau(mu), dalpha(0.0);

    if (stdx::any_of(plastic)) {
      const V tol = V(cfg.tol) * stdx::max(V(mu), f_old);
      V x(0.0);
      V g = abs_tt - f_old;
      M conv(false);
      bracketed_newton(x, g, V(0.0), stdx::abs(phi_e_trial), plastic, conv, tol, q, mu, p,
                       cfg.max_iter, [&](const V& xv) {
                         return abs_tt - V(mu) * xv - f_iso_v(q + xv, p);
                       });
      const M ok = plastic && conv && x > 0.0;
      const V gp = V(-mu) - f_iso_prime_v(q + x, p);
      stdx::where(ok, phi_p_new) = phi_p + h * x;
      stdx::where(ok, q_new) = q + x;
      stdx::where(ok, alpha_new) = alpha + x;
      stdx::where(ok, phi_e) = phi_new - phi_p_new;
      stdx::where(ok, tau) = V(mu) * phi_e;
      stdx::where(ok, dtau) = V(mu) + V(mu * mu) / gp;
      stdx::where(ok, dalpha) = x;
    }

    store(tau, b.tau, i);
    store(phi_e, b.phi_e, i);
    store(phi_p_new, b.phi_p_new, i);
    store(q_new, b.q_new, i);
    store(alpha_new, b.alpha_new, i);
    store(dtau, b.dtau_dphi, i);
    store(dalpha, b.delta_alpha, i);
    for (std::size_t l = 0; l < W; ++l) {
      b.plastic[i + l] = plastic[l] ? 1 : 0;
      // unconverged or inconsistent lanes: the scalar path reports the error
      if (plastic[l] && !(b.delta_alpha[i + l] > 0.0)) return_map_lane(b, i + l, p, cfg);
    }
  }
  if (i < n) return_map_scalar(b, p, cfg, i);
}

void interval_solve_avx2(std::span<const double> phi_bar, const analytic::IntervalState& is,
                         const material::ElastoplasticParams& p,
                         const material::NewtonConfig& cfg, std::span<double> tau,
                         std::span<double> phi_p_bar, std::span<double> q) {
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1 || !(is.q0 >= 0.0))
    return interval_solve_scalar(phi_bar, is, p, cfg, tau, phi_p_bar, q);
  const double mu = p.mu_f;
  const double f0 = material::f_iso(is.q0, p);
  const V tol(cfg.tol * std::max(mu, f0));
  const V q0(is.q0);
  const std::size_t n = phi_bar.size();
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    const V pb = load(phi_bar, i);
    V h(1.0);
    stdx::where(pb < 0.0, h) = V(-1.0);
    const V abs_phi = stdx::abs(pb);
    const V drive = h * V(is.tau0) + V(mu) * abs_phi;

    V t = V(is.tau0) + V(mu) * pb;
    V ppb(0.0);
    V qn = q0;
    V g = drive - V(f0);
    const M plastic = g > 0.0;
    M ok(false);
    if (stdx::any_of(plastic)) {
      V x(0.0);
      M conv(false);
      const V hi = abs_phi + stdx::max(h * V(is.tau0), V(0.0)) / V(mu);
      bracketed_newton(x, g, V(0.0), hi, plastic, conv, tol, q0, mu, p, cfg.max_iter,
                       [&](const V& xv) { return drive - V(mu) * xv - f_iso_v(q0 + xv, p); });
      ok = plastic && conv;
      stdx::where(ok, ppb) = h * x;
      stdx::where(ok, qn) = q0 + x;
      stdx::where(ok, t) = V(is.tau0) + V(mu) * (pb - ppb);
    }
    store(t, tau, i);
    store(ppb, phi_p_bar, i);
    store(qn, q, i);
    for (std::size_t l = 0; l < W; ++l)
      if (plastic[l] && !ok[l])
        interval_solve_scalar(phi_bar.subspan(i + l, 1), is, p, cfg, tau.subspan(i + l, 1),
                              phi_p_bar.subspan(i + l, 1), q.subspan(i + l, 1));
  }
  if (i < n) interval_solve_scalar(phi_bar, is, p, cfg, tau, phi_p_bar, q, i);
}

}  // namespace fabricplast::kernels::detail
