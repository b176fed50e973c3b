#include "fabricplast/fe_membrane.hpp"

#include "fabricplast/error.hpp"
#include "fabricplast/io.hpp"
#include "fabricplast/kernels.hpp"
#include "fabricplast/kinematics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace fabricplast::fe {

namespace {

constexpr double kXi[4] = {-1.0, 1.0, 1.0, -1.0};
constexpr double kEta[4] = {-1.0, -1.0, 1.0, 1.0};

struct ShapeDerivs {
  std::array<Vec2, 4> dN;  // dN_a/dξ^α
};

ShapeDerivs shape_derivs(double xi, double eta) {
  ShapeDerivs s;
  for (int a = 0; a < 4; ++a)
    s.dN[a] = Vec2(0.25 * kXi[a] * (1.0 + kEta[a] * eta), 0.25 * kEta[a] * (1.0 + kXi[a] * xi));
  return s;
}

Mat2 tangents(const std::array<Vec2, 4>& P, const ShapeDerivs& s) {
  Mat2 T = Mat2::Zero();  // column α is the tangent vector ∂P/∂ξ^α
  for (int a = 0; a < 4; ++a) T += P[a] * s.dN[a].transpose();
  return T;
}

Mat2 frame_map_rate(double theta) {
  const double psi = 0.5 * (std::numbers::pi - theta);
  Mat2 dF = Mat2::Zero();
  dF(0, 0) = 0.5 * std::numbers::sqrt2 * std::sin(psi);
  dF(1, 1) = -0.5 * std::numbers::sqrt2 * std::cos(psi);
  return dF;
}

}  // namespace

std::array<Vec2, 2> diagonal_fibers() {
  const double s = 1.0 / std::numbers::sqrt2;
  return {Vec2(s, s), Vec2(-s, s)};
}

void gauss_rule(int order, std::vector<double>& pts, std::vector<double>& wts) {
  switch (order) {
    case 1:
      pts = {0.0};
      wts = {2.0};
      break;
    case 2: {
      const double g = 1.0 / std::sqrt(3.0);
      pts = {-g, g};
      wts = {1.0, 1.0};
      break;
    }
    case 3: {
      const double g = std::sqrt(0.6);
      pts = {-g, 0.0, g};
      wts = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    }
    default:
      throw DomainError("quadrature order must be 1, 2 or 3");
  }
}

void Mesh::validate(int quadrature_order) const {
  std::vector<double> pts, wts;
  gauss_rule(quadrature_order, pts, wts);
  const int nn = static_cast<int>(nodes.size());
  for (const auto& e : elements) {
    std::array<Vec2, 4> X;
    for (int a = 0; a < 4; ++a) {
      if (e[a] < 0 || e[a] >= nn) throw DomainError("element references a missing node");
      X[a] = nodes[e[a]];
    }
    for (double xi : pts)
      for (double eta : pts)
        if (!(tangents(X, shape_derivs(xi, eta)).determinant() > 0.0))
          throw ElementInversionError("non-positive reference Jacobian");
  }
  for (int b : boundary_nodes)
    if (b < 0 || b >= nn) throw DomainError("boundary node index out of range");
}

Mesh make_picture_frame_mesh(int n, double L0) {
  if (n < 1) throw DomainError("mesh needs at least one element per side");
  if (!(L0 > 0.0)) throw DomainError("frame length must be positive");
  const auto fib = diagonal_fibers();
  Mesh m;
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double s = L0 * i / n - 0.5 * L0;
      const double t = L0 * j / n - 0.5 * L0;
      m.nodes.push_back(s * fib[0] + t * fib[1]);
      if (i == 0 || j == 0 || i == n || j == n) m.boundary_nodes.push_back(id(i, j));
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      m.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return m;
}

void SolverConfig::validate() const {
  if (!(steps_per_degree > 0.0) || !(newton_tol > 0.0) || newton_max_iter < 1 ||
      max_bisections < 0)
    throw DomainError("solver configuration values must be positive");
  std::vector<double> p, w;
  gauss_rule(quadrature_order, p, w);
}

ElementOutput element_residual_and_tangent(const std::array<Vec2, 4>& X,
                                           const std::array<Vec2, 4>& x,
                                           std::span<const GaussPointState> committed,
                                           const material::ElastoplasticParams& ep,
                                           const material::HyperelasticParams& hp,
                                           int quadrature_order,
                                           const std::array<Vec2, 2>& fibers) {
  std::vector<double> pts, wts;
  gauss_rule(quadrature_order, pts, wts);
  const std::size_t ngp = pts.size() * pts.size();
  if (committed.size() != ngp) throw DomainError("one committed state per quadrature point");

  struct Point {
    ShapeDerivs sd;
    Mat2 a_t;  // current tangents
    double dA;
    kinematics::MetricPoint m;
    kinematics::RefFiberPair f;
    kinematics::FiberState fs;
  };
  std::vector<Point> gp(ngp);
  std::vector<double> phi(ngp), phi_p(ngp), q(ngp), alpha(ngp);

  std::size_t k = 0;
  for (std::size_t j = 0; j < pts.size(); ++j)
    for (std::size_t i = 0; i < pts.size(); ++i, ++k) {
      Point& P = gp[k];
      P.sd = shape_derivs(pts[i], pts[j]);
      const Mat2 A_t = tangents(X, P.sd);
      P.a_t = tangents(x, P.sd);
      const double jac = A_t.determinant();
      if (!(jac > 0.0)) throw ElementInversionError("non-positive reference Jacobian");
      if (!(P.a_t.determinant() > 0.0)) throw ElementInversionError("element inverted");
      P.dA = jac * wts[i] * wts[j];
      P.m = kinematics::MetricPoint::make(A_t.transpose() * A_t, P.a_t.transpose() * P.a_t);
      // contravariant components L^α = A^{αβ} (A_β · L)
      const Vec2 L1 = P.m.A_inv * (A_t.transpose() * fibers[0]);
      const Vec2 L2 = P.m.A_inv * (A_t.transpose() * fibers[1]);
      P.f = kinematics::RefFiberPair::make(P.m.A_ab, L1, L2);
      P.fs = kinematics::fiber_state(P.m, P.f);
      phi[k] = P.fs.theta12 - P.f.Theta12;
      phi_p[k] = committed[k].plastic.phi_p;
      q[k] = committed[k].plastic.q;
      alpha[k] = committed[k].plastic.alpha_p;
    }

  std::vector<double> tau(ngp), phi_e(ngp), phi_p_new(ngp), q_new(ngp), alpha_new(ngp),
      dtau(ngp), dalpha(ngp);
  std::vector<std::uint8_t> plastic(ngp);
  kernels::ReturnMapBatch batch{phi,   phi_p,     q,     alpha,     tau,    phi_e,
                                phi_p_new, q_new, alpha_new, dtau, dalpha, plastic};
  kernels::return_map(kernels::active(), batch, ep);

  ElementOutput out;
  out.trial.resize(ngp);
  out.gp.resize(ngp);
  for (k = 0; k < ngp; ++k) {
    const Point& P = gp[k];
    material::StressReturn sr;
    sr.tau = tau[k];
    sr.phi_e = phi_e[k];
    sr.dtau_dphi = dtau[k];
    sr.new_state = {phi_p_new[k], q_new[k], alpha_new[k]};
    out.trial[k] = sr.new_state;
    out.gp[k] = {P.fs.theta12, tau[k], phi_e[k], phi_p_new[k], q_new[k]};

    const auto st = kinematics::structural_tensors(P.m, P.fs);
    const auto s = material::membrane_stress(P.m, P.f, sr, st, hp);

    for (int a = 0; a < 4; ++a) {
      const Vec2& Na = P.sd.dN[a];
      Vec2 fa = Vec2::Zero();
      for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be) fa += s.tau_ab(al, be) * Na(al) * P.a_t.col(be);
      out.residual.segment<2>(2 * a) += P.dA * fa;

      for (int b = 0; b < 4; ++b) {
        const Vec2& Nb = P.sd.dN[b];
        Mat2 Kab = Mat2::Zero();
        double geo = 0.0;
        for (int al = 0; al < 2; ++al)
          for (int be = 0; be < 2; ++be) {
            geo += s.tau_ab(al, be) * Na(al) * Nb(be);
            for (int ga = 0; ga < 2; ++ga)
              for (int de = 0; de < 2; ++de)
                Kab += (s.c_ab(al, be, ga, de) * Na(al) * Nb(de)) *
                       (P.a_t.col(be) * P.a_t.col(ga).transpose());
          }
        Kab += geo * Mat2::Identity();
        out.tangent.block<2, 2>(2 * a, 2 * b) += P.dA * Kab;
      }
    }
  }
  return out;
}

namespace {

struct Solver {
  const Mesh& mesh;
  double L0;
  const SolverConfig& cfg;
  const material::ElastoplasticParams& ep;
  const material::HyperelasticParams& hp;

  std::size_t ngp_per_el = 0;
  std::vector<int> dof_map{};  // global dof -> free index or -1
  int nfree = 0;
  std::vector<Vec2> x{};
  std::vector<GaussPointState> states{};

  struct Assembly {
    Eigen::VectorXd R;
    Eigen::MatrixXd K;
    std::vector<GaussPointState> trial;
    std::vector<GaussPointResult> gp;
  };

  void init() {
    std::vector<double> p, w;
    gauss_rule(cfg.quadrature_order, p, w);
    ngp_per_el = p.size() * p.size();
    const int nn = static_cast<int>(mesh.nodes.size());
    std::vector<bool> fixed(nn, false);
    for (int b : mesh.boundary_nodes) fixed[b] = true;
    dof_map.assign(2 * nn, -1);
    for (int i = 0; i < nn; ++i)
      if (!fixed[i]) {
        dof_map[2 * i] = nfree++;
        dof_map[2 * i + 1] = nfree++;
      }
    x = mesh.nodes;
    states.assign(mesh.elements.size() * ngp_per_el, GaussPointState{});
  }

  Assembly assemble(const std::vector<Vec2>& pos, bool need_tangent) const {
    const int ndof = 2 * static_cast<int>(mesh.nodes.size());
    Assembly as;
    as.R = Eigen::VectorXd::Zero(ndof);
    if (need_tangent) as.K = Eigen::MatrixXd::Zero(nfree, nfree);
    as.trial.resize(states.size());
    as.gp.resize(states.size());
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
      const auto& conn = mesh.elements[e];
      std::array<Vec2, 4> Xe, xe;
      for (int a = 0; a < 4; ++a) {
        Xe[a] = mesh.nodes[conn[a]];
        xe[a] = pos[conn[a]];
      }
      const std::span<const GaussPointState> st(states.data() + e * ngp_per_el, ngp_per_el);
      const auto out = element_residual_and_tangent(Xe, xe, st, ep, hp, cfg.quadrature_order);
      for (std::size_t g = 0; g < ngp_per_el; ++g) {
        as.trial[e * ngp_per_el + g].plastic = out.trial[g];
        as.gp[e * ngp_per_el + g] = out.gp[g];
      }
      for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 2; ++i) {
          const int I = 2 * conn[a] + i;
          as.R(I) += out.residual(2 * a + i);
          if (!need_tangent || dof_map[I] < 0) continue;
          for (int b = 0; b < 4; ++b)
            for (int j = 0; j < 2; ++j) {
              const int J = dof_map[2 * conn[b] + j];
              if (J >= 0) as.K(dof_map[I], J) += out.tangent(2 * a + i, 2 * b + j);
            }
        }
    }
    return as;
  }

  double free_norm(const Eigen::VectorXd& R) const {
    double s = 0.0;
    for (int I = 0; I < R.size(); ++I)
      if (dof_map[I] >= 0) s += R(I) * R(I);
    return std::sqrt(s);
  }

  // x += K^-1 (-R) on the free DOFs. False when the solve is not finite.
  bool correct(const Assembly& as) {
    Eigen::VectorXd rf(nfree);
    for (int I = 0; I < as.R.size(); ++I)
      if (dof_map[I] >= 0) rf(dof_map[I]) = as.R(I);
    const Eigen::VectorXd du = as.K.partialPivLu().solve(-rf);
    if (!du.allFinite()) return false;
    for (std::size_t n = 0; n < x.size(); ++n)
      for (int i = 0; i < 2; ++i) {
        const int J = dof_map[2 * n + i];
        if (J >= 0) x[n](i) += du(J);
      }
    return true;
  }

  // One Newton solve to frame angle theta. Returns the converged assembly,
  // leaves x at the solution. On failure x is unspecified and false returned.
  // A converged solve gets one extra correction, kept if it lowers the residual.
  bool newton(double theta, Assembly& as, StepInfo& info) {
    const Mat2 F = kinematics::picture_frame_map(theta);
    for (int b : mesh.boundary_nodes) x[b] = F * mesh.nodes[b];
    const double scale = ep.mu_f * L0;
    for (int it = 0; it <= cfg.newton_max_iter; ++it) {
      as = assemble(x, true);
      const double r = free_norm(as.R) / scale;
      info.residuals.push_back(r);
      if (!std::isfinite(r)) return false;
      if (r <= cfg.newton_tol) {
        info.iterations = it;
        if (nfree > 0 && r > 0.0) {
          const std::vector<Vec2> x_conv = x;
          if (correct(as)) {
            Assembly polished = assemble(x, true);
            const double rp = free_norm(polished.R) / scale;
            if (rp <= r) {
              info.residuals.push_back(rp);
              as = std::move(polished);
              return true;
            }
          }
          x = x_conv;
        }
        return true;
      }
      if (it == cfg.newton_max_iter) break;
      if (!correct(as)) return false;
    }
    return false;
  }

  // Advances from theta0 to theta1, halving on failure. Commits states.
  Assembly advance(double theta0, double theta1, int depth, StepInfo& info) {
    const std::vector<Vec2> x_start = x;
    Assembly as;
    bool ok = false;
    try {
      ok = newton(theta1, as, info);
    } catch (const Error&) {
      ok = false;
    }
    if (ok) {
      states = as.trial;
      return as;
    }
    if (depth >= cfg.max_bisections) throw SolverError("Newton failed after step halving", info.step);
    x = x_start;
    info.bisections = std::max(info.bisections, depth + 1);
    const double mid = 0.5 * (theta0 + theta1);
    advance(theta0, mid, depth + 1, info);
    return advance(mid, theta1, depth + 1, info);
  }

  double reaction(const Eigen::VectorXd& R, double theta) const {
    const Mat2 dF = frame_map_rate(theta);
    double work = 0.0;
    for (int b : mesh.boundary_nodes) work += R.segment<2>(2 * b).dot(dF * mesh.nodes[b]);
    return work / kinematics::crosshead_rate(theta, L0);
  }
};

analytic::CurveSample average_sample(const std::vector<GaussPointResult>& gp, double theta,
                                     double force) {
  analytic::CurveSample s;
  s.gamma_deg = analytic::gamma_deg_from_theta(theta);
  for (const auto& r : gp) {
    s.theta12 += r.theta12;
    s.tau += r.tau;
    s.phi_e += r.phi_e;
    s.phi_p += r.phi_p;
    s.q += r.q;
  }
  const double n = static_cast<double>(gp.size());
  s.theta12 /= n;
  s.tau /= n;
  s.phi_e /= n;
  s.phi_p /= n;
  s.q /= n;
  s.frame_force = force;
  return s;
}

}  // namespace

Result solve_picture_frame(const Mesh& mesh, double L0, const analytic::LoadProgram& program,
                           const SolverConfig& cfg, const material::ElastoplasticParams& ep,
                           const material::HyperelasticParams& hp) {
  cfg.validate();
  program.validate();
  mesh.validate(cfg.quadrature_order);
  if (!(L0 > 0.0)) throw DomainError("frame length must be positive");

  Solver S{mesh, L0, cfg, ep, hp};
  S.init();
  Result res;

  const auto record = [&](int step, double theta, const Solver::Assembly& as) {
    res.thetas.push_back(theta);
    res.curve.samples.push_back(average_sample(as.gp, theta, S.reaction(as.R, theta)));
    if (cfg.record_fields)
      for (std::size_t g = 0; g < as.gp.size(); ++g)
        res.fields.push_back({step, static_cast<int>(g), as.gp[g]});
  };

  double theta = program.theta_start;
  {
    const Mat2 F = kinematics::picture_frame_map(theta);
    for (std::size_t n = 0; n < S.x.size(); ++n) S.x[n] = F * mesh.nodes[n];
    record(0, theta, S.assemble(S.x, false));
  }

  int step = 0;
  for (double target : program.targets) {
    const double dgamma = std::abs(target - theta) * 180.0 / std::numbers::pi;
    const int n = std::max(1, static_cast<int>(std::ceil(dgamma * cfg.steps_per_degree - 1e-9)));
    const double t0 = theta;
    for (int k = 1; k <= n; ++k) {
      const double t1 = k == n ? target : t0 + (target - t0) * k / n;
      StepInfo info;
      info.step = ++step;
      info.theta = t1;
      const auto as = S.advance(theta, t1, 0, info);
      record(step, t1, as);
      res.steps.push_back(std::move(info));
      theta = t1;
    }
  }
  res.states = S.states;
  return res;
}

void write_fields(std::ostream& os, const std::vector<FieldRecord>& fields) {
  os << "step,gp_index,theta12,tau,phi_e,phi_p,q\n";
  for (const auto& f : fields) {
    os << f.step << ',' << f.gp_index << ',';
    io::write_row(os, {f.r.theta12, f.r.tau, f.r.phi_e, f.r.phi_p, f.r.q});
  }
}

}  // namespace fabricplast::fe
