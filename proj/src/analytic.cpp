#include "fabricplast/analytic.hpp"

#include "fabricplast/error.hpp"
#include "fabricplast/io.hpp"
#include "fabricplast/kernels.hpp"
#include "fabricplast/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace fabricplast::analytic {

using material::ElastoplasticParams;
using material::NewtonConfig;

namespace {

void check_theta(double theta) {
  if (!(theta > 0.0) || theta > std::numbers::pi / 2 + 1e-15)
    throw DomainError("frame angle must lie in (0, pi/2]");
}

CurveSample make_sample(double theta, const IntervalSolution& s, double phi_p_total,
                        double L0) {
  CurveSample c;
  c.gamma_deg = gamma_deg_from_theta(theta);
  c.theta12 = std::cos(theta);
  c.tau = s.tau;
  c.phi_p = phi_p_total;
  c.phi_e = c.theta12 - phi_p_total;
  c.q = s.q;
  c.frame_force = frame_force(s.tau, theta, L0);
  return c;
}

}  // namespace

LoadProgram LoadProgram::from_gamma_deg(const std::vector<double>& gammas, int samples,
                                        Sampling sampling) {
  LoadProgram lp;
  lp.samples_per_interval = samples;
  lp.sampling = sampling;
  for (double g : gammas) lp.targets.push_back(theta_from_gamma_deg(g));
  lp.validate();
  return lp;
}

void LoadProgram::validate() const {
  if (samples_per_interval < 1) throw DomainError("samples_per_interval must be >= 1");
  check_theta(theta_start);
  double prev = theta_start;
  for (double t : targets) {
    check_theta(t);
    if (t == prev) throw DomainError("consecutive load targets must differ");
    prev = t;
  }
}

double gamma_deg_from_theta(double theta) { return 90.0 - theta * 180.0 / std::numbers::pi; }

double theta_from_gamma_deg(double gamma_deg) {
  return (90.0 - gamma_deg) * std::numbers::pi / 180.0;
}

double yield_angle(const IntervalState& is, const ElastoplasticParams& p) {
  return (material::f_iso(is.q0, p) + std::abs(is.tau0)) / p.mu_f;
}

double yield_angle(const IntervalState& is, double direction, const ElastoplasticParams& p) {
  const double h = direction < 0.0 ? -1.0 : 1.0;
  return std::max(0.0, (material::f_iso(is.q0, p) - h * is.tau0) / p.mu_f);
}

IntervalSolution interval_solve(double phi_bar, const IntervalState& is,
                                const ElastoplasticParams& p, const NewtonConfig& cfg) {
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1)
    throw DomainError("Newton configuration needs tol > 0 and max_iter >= 1");
  const double mu = p.mu_f;
  const double h = phi_bar < 0.0 ? -1.0 : 1.0;
  const double abs_phi = std::abs(phi_bar);
  const double f0 = material::f_iso(is.q0, p);
  const double drive = h * is.tau0 + mu * abs_phi;

  IntervalSolution s;
  s.tau = is.tau0 + mu * phi_bar;
  s.q = is.q0;
  double g = drive - f0;
  if (g <= 0.0) return s;

  const double tol = cfg.tol * std::max(mu, f0);
  double lo = 0.0;
  double hi = abs_phi + std::max(h * is.tau0, 0.0) / mu;
  double x = 0.0;
  bool converged = false;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    if (g > 0.0)
      lo = x;
    else
      hi = x;
    const double gp = -mu - material::f_iso_prime(is.q0 + x, p);
    double x_new = x - g / gp;
    if (!(x_new > lo && x_new < hi)) x_new = 0.5 * (lo + hi);
    const bool stalled = x_new == x;
    x = x_new;
    g = drive - mu * x - material::f_iso(is.q0 + x, p);
    if (std::abs(g) <= tol) {
      converged = true;
      ++it;
      // polishing step
      if (g > 0.0)
        lo = x;
      else
        hi = x;
      const double xp = x - g / (-mu - material::f_iso_prime(is.q0 + x, p));
      if (xp > lo && xp <= hi) {
        const double gn = drive - mu * xp - material::f_iso(is.q0 + xp, p);
        if (std::abs(gn) <= std::abs(g)) {
          x = xp;
          g = gn;
        }
      }
      break;
    }
    if (stalled) break;
  }
  if (!converged) throw ConvergenceError("interval solution did not converge", std::abs(g), it);

  s.plastic = true;
  s.phi_p_bar = h * x;
  s.q = is.q0 + x;
  s.tau = is.tau0 + mu * (phi_bar - s.phi_p_bar);
  s.iterations = it;
  s.residual = std::abs(g);
  return s;
}

IntervalState roll_over(const IntervalState& is, const IntervalSolution& end) {
  const double da = std::abs(end.phi_p_bar);
  return {end.tau, is.alpha_p0 + da, is.q0 + da, is.Q0 + da};
}

ShearCurve run_program(const LoadProgram& lp, const ElastoplasticParams& p, double L0) {
  lp.validate();
  const int n = lp.samples_per_interval;
  const auto backend = kernels::active();

  ShearCurve curve;
  IntervalState st;
  double phi_p_start = 0.0;
  double th0 = lp.theta_start;
  curve.samples.push_back(make_sample(th0, interval_solve(0.0, st, p), 0.0, L0));

  std::vector<double> thetas(n), phi_bar(n), tau(n), phi_p_bar(n), q(n);
  for (double target : lp.targets) {
    const double c0 = std::cos(th0);
    const double c1 = std::cos(target);
    for (int k = 1; k <= n; ++k) {
      double th;
      if (k == n)
        th = target;
      else if (lp.sampling == Sampling::cosine)
        th = std::acos(c0 + (c1 - c0) * k / n);
      else
        th = th0 + (target - th0) * k / n;
      thetas[k - 1] = th;
      phi_bar[k - 1] = std::cos(th) - c0;
    }
    kernels::interval_solve(backend, phi_bar, st, p, {}, tau, phi_p_bar, q);
    for (int k = 0; k < n; ++k) {
      IntervalSolution s;
      s.tau = tau[k];
      s.phi_p_bar = phi_p_bar[k];
      s.q = q[k];
      curve.samples.push_back(make_sample(thetas[k], s, phi_p_start + s.phi_p_bar, L0));
    }
    IntervalSolution end;
    end.tau = tau[n - 1];
    end.phi_p_bar = phi_p_bar[n - 1];
    end.q = q[n - 1];
    st = roll_over(st, end);
    phi_p_start += end.phi_p_bar;
    th0 = target;
  }
  return curve;
}

ShearCurve evaluate_path(const std::vector<double>& thetas, const ElastoplasticParams& p,
                         double L0, double theta_start) {
  check_theta(theta_start);
  ShearCurve curve;
  IntervalState st;
  double phi_p_start = 0.0;
  double c_start = std::cos(theta_start);
  double prev_c = c_start;
  double dir = 0.0;
  IntervalSolution prev;
  for (double th : thetas) {
    check_theta(th);
    const double c = std::cos(th);
    const double d = c - prev_c;
    if (d != 0.0) {
      const double h = d > 0.0 ? 1.0 : -1.0;
      if (dir != 0.0 && h != dir) {
        st = roll_over(st, prev);
        phi_p_start += prev.phi_p_bar;
        c_start = prev_c;
      }
      dir = h;
    }
    prev = interval_solve(c - c_start, st, p);
    prev_c = c;
    curve.samples.push_back(make_sample(th, prev, phi_p_start + prev.phi_p_bar, L0));
  }
  return curve;
}

double frame_force(double tau, double theta, double L0) {
  check_theta(theta);
  return L0 * L0 * tau * (-std::sin(theta)) / kinematics::crosshead_rate(theta, L0);
}

void write_curve(std::ostream& os, const ShearCurve& c, double force_scale) {
  os << "gamma_deg,theta12,tau,phi_e,phi_p,q,frame_force_normalized\n";
  for (const auto& s : c.samples)
    io::write_row(os, {s.gamma_deg, s.theta12, s.tau, s.phi_e, s.phi_p, s.q,
                       s.frame_force / force_scale});
}

}  // namespace fabricplast::analytic
