#include "fabricplast/material.hpp"

#include "fabricplast/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fabricplast::material {

namespace {

void require_q(double q) {
  if (!(q >= 0.0)) throw DomainError("hardening variable must be non-negative, got " + std::to_string(q));
}

double sech_sq(double x) {
  const double ch = std::cosh(x);
  return 1.0 / (ch * ch);
}

}  // namespace

ElastoplasticParams ElastoplasticParams::make(double mu_f, double tau_y, double A, double a,
                                              double B, double b, double C, double c) {
  ElastoplasticParams p{mu_f, tau_y, A, a, B, b, C, c};
  p.validate();
  return p;
}

void ElastoplasticParams::validate() const {
  const double all[] = {mu_f, tau_y, A, a, B, b, C, c};
  for (double v : all)
    if (!std::isfinite(v)) throw InvalidParameterError("non-finite elastoplastic parameter");
  if (!(mu_f > 0.0)) throw InvalidParameterError("mu_f must be positive");
  if (tau_y < 0.0) throw InvalidParameterError("tau_y must be non-negative");
  if (C < 0.0) throw InvalidParameterError("C must be non-negative");
  if (c < 1.0) throw InvalidParameterError("c must be at least 1");
  const int n = static_cast<int>(std::lround(kAdmissibleQMax / kAdmissibleQStep));
  for (int i = 0; i <= n; ++i) {
    const double q = i * kAdmissibleQStep;
    if (!(f_iso_prime(q, *this) > 0.0))
      throw InvalidParameterError("hardening slope f_iso'(q) is not positive at q = " +
                                  std::to_string(q));
  }
}

void HyperelasticParams::validate() const {
  const double all[] = {eps_L, beta_n, beta_g, beta_tau};
  for (double v : all)
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidParameterError("hyperelastic stiffnesses must be finite and non-negative");
}

double f_iso(double q, const ElastoplasticParams& p) {
  require_q(q);
  return p.tau_y + p.A * std::asinh(p.a * q) + p.B * std::tanh(p.b * q) + p.C * std::pow(q, p.c);
}

double f_iso_prime(double q, const ElastoplasticParams& p) {
  require_q(q);
  const double aq = p.a * q;
  return p.A * p.a / std::sqrt(1.0 + aq * aq) + p.B * p.b * sech_sq(p.b * q) +
         p.C * p.c * std::pow(q, p.c - 1.0);
}

double yield_function(double tau, double q, const ElastoplasticParams& p) {
  return std::abs(tau) - f_iso(q, p);
}

double return_residual(double abs_tau_trial, double q_old, double delta_alpha,
                       const ElastoplasticParams& p) {
  return abs_tau_trial - p.mu_f * delta_alpha - f_iso(q_old + delta_alpha, p);
}

StressReturn return_map(double phi_new, const PlasticState& state_old,
                        const ElastoplasticParams& p, const NewtonConfig& cfg) {
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1)
    throw DomainError("Newton configuration needs tol > 0 and max_iter >= 1");

  const double mu = p.mu_f;
  const double phi_e_trial = phi_new - state_old.phi_p;
  const double tau_trial = mu * phi_e_trial;
  const double h = tau_trial >= 0.0 ? 1.0 : -1.0;
  const double f_old = f_iso(state_old.q, p);

  StressReturn r;
  if (h * tau_trial - f_old <= 0.0) {
    r.tau = tau_trial;
    r.phi_e = phi_e_trial;
    r.new_state = state_old;
    r.dtau_dphi = mu;
    return r;
  }

  // g is strictly decreasing with g(0) > 0 and g(|φe_trial|) <= 0, so the
  // root is bracketed. Newton from 0, bisection when a step leaves the bracket.
  const double abs_tt = h * tau_trial;
  const double tol = cfg.tol * std::max(mu, f_old);
  double lo = 0.0;
  double hi = std::abs(phi_e_trial);
  double x = 0.0;
  double g = abs_tt - f_old;
  bool converged = false;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    if (g > 0.0)
      lo = x;
    else
      hi = x;
    const double gp = -mu - f_iso_prime(state_old.q + x, p);
    double x_new = x - g / gp;
    if (!(x_new > lo && x_new < hi)) x_new = 0.5 * (lo + hi);
    const bool stalled = x_new == x;
    x = x_new;
    g = return_residual(abs_tt, state_old.q, x, p);
    if (std::abs(g) <= tol) {
      converged = true;
      ++it;
      // polishing step
      if (g > 0.0)
        lo = x;
      else
        hi = x;
      const double xp = x - g / (-mu - f_iso_prime(state_old.q + x, p));
      if (xp > lo && xp <= hi) {
        const double gn = return_residual(abs_tt, state_old.q, xp, p);
        if (std::abs(gn) <= std::abs(g)) {
          x = xp;
          g = gn;
        }
      }
      break;
    }
    if (stalled) break;
  }
  if (!converged) throw ConvergenceError("return mapping did not converge", std::abs(g), it);
  if (!(x > 0.0)) throw ConsistencyError("non-positive plastic multiplier at a plastic step");

  const double gp = -mu - f_iso_prime(state_old.q + x, p);
  r.is_plastic = true;
  r.delta_alpha = x;
  r.residual = std::abs(g);
  r.iterations = it;
  r.new_state.phi_p = state_old.phi_p + h * x;
  r.new_state.q = state_old.q + x;
  r.new_state.alpha_p = state_old.alpha_p + x;
  r.phi_e = phi_new - r.new_state.phi_p;
  r.tau = mu * r.phi_e;
  r.dtau_dphi = mu + mu * mu / gp;
  return r;
}

AngleStress angle_stress_and_tangent(const StressReturn& sr,
                                     const kinematics::StructuralTensors& st) {
  AngleStress s;
  s.tau_ab = 2.0 * sr.tau * st.g12;
  s.c_ab = (4.0 * sr.dtau_dphi) * outer(st.g12, st.g12) + (4.0 * sr.tau) * st.g12_grad;
  return s;
}

AngleStress membrane_stress(const kinematics::MetricPoint& m, const kinematics::RefFiberPair& f,
                            const StressReturn& sr, const kinematics::StructuralTensors& st,
                            const HyperelasticParams& hp) {
  AngleStress s = angle_stress_and_tangent(sr, st);
  for (int i = 0; i < 2; ++i) {
    const Vec2& L = f.L(i);
    const double lambda = kinematics::push_forward_fiber(m, L).lambda;
    const Mat2 LL = dyad(L, L);
    s.tau_ab += hp.eps_L * (lambda - 1.0) / lambda * LL;
    s.c_ab += (hp.eps_L / (lambda * lambda * lambda)) * outer(LL, LL);
  }
  return s;
}

MomentResponse moments_and_bending_tangents(const kinematics::MetricPoint& m,
                                            const kinematics::RefFiberPair& f,
                                            const kinematics::CurvaturePoint& c,
                                            const HyperelasticParams& hp) {
  const auto inv = kinematics::surface_invariants(m, f, c);
  MomentResponse r;
  r.M0.setZero();
  r.Mbar0.setZero();
  for (int i = 0; i < 2; ++i) {
    const Vec2& L = f.L(i);
    const Mat2 LL = dyad(L, L);
    const Mat2 cL = sym_dyad(c.c0[i], L);
    r.M0 += hp.beta_n * inv.fiber[i].K_n * LL + hp.beta_tau * inv.fiber[i].T_g * cL;
    r.Mbar0 += hp.beta_g * inv.fiber[i].K_g * LL;
    r.f_tan += hp.beta_n * outer(LL, LL) + hp.beta_tau * outer(cL, cL);
    r.fbar_tan += hp.beta_g * outer(LL, LL);
  }
  return r;
}

double strain_energy(const kinematics::MetricPoint& m, const kinematics::RefFiberPair& f,
                     const kinematics::CurvaturePoint& c, double phi_e,
                     const HyperelasticParams& hp, const ElastoplasticParams& ep) {
  const auto inv = kinematics::surface_invariants(m, f, c);
  double W = 0.5 * ep.mu_f * phi_e * phi_e;
  for (int i = 0; i < 2; ++i) {
    const double lambda = std::sqrt(inv.fiber[i].Lambda);
    const auto& fi = inv.fiber[i];
    W += 0.5 * hp.eps_L * (lambda - 1.0) * (lambda - 1.0);
    W += 0.5 * (hp.beta_n * fi.K_n * fi.K_n + hp.beta_g * fi.K_g * fi.K_g);
    W += 0.5 * hp.beta_tau * fi.T_g * fi.T_g;
  }
  return W;
}

}  // namespace fabricplast::material
