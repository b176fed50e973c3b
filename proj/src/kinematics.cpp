#include "fabricplast/kinematics.hpp"

#include "fabricplast/error.hpp"

#include <cmath>
#include <numbers>

namespace fabricplast::kinematics {

namespace {

void require_spd(const Mat2& M, const char* name) {
  if (!M.allFinite()) throw InvalidMetricError(std::string(name) + " has non-finite components");
  if (std::abs(M(0, 1) - M(1, 0)) > 1e-12 * M.cwiseAbs().maxCoeff())
    throw InvalidMetricError(std::string(name) + " is not symmetric");
  if (!(M(0, 0) > 0.0) || !(M.determinant() > 0.0))
    throw InvalidMetricError(std::string(name) + " is not positive definite");
}

Mat2 symmetrized(const Mat2& M) { return 0.5 * (M + M.transpose()); }

// L^I = Θ^{IJ} L_J
std::array<Vec2, 2> dual_fibers(const RefFiberPair& f) {
  const double det = 1.0 - f.Theta12 * f.Theta12;
  if (std::abs(det) < kDegenerateFiberTol)
    throw DegenerateFiberError("reference fibers are parallel (det[Theta_IJ] = " +
                               std::to_string(det) + ")");
  const double inv11 = 1.0 / det;
  const double inv12 = -f.Theta12 / det;
  return {inv11 * f.L1 + inv12 * f.L2, inv12 * f.L1 + inv11 * f.L2};
}

}  // namespace

MetricPoint MetricPoint::make(const Mat2& A_ab, const Mat2& a_ab) {
  require_spd(A_ab, "reference metric");
  require_spd(a_ab, "current metric");
  MetricPoint m;
  m.A_ab = symmetrized(A_ab);
  m.a_ab = symmetrized(a_ab);
  m.A_inv = m.A_ab.inverse();
  return m;
}

RefFiberPair RefFiberPair::make(const Mat2& A_ab, const Vec2& L1, const Vec2& L2) {
  const double n1 = std::sqrt(L1.dot(A_ab * L1));
  const double n2 = std::sqrt(L2.dot(A_ab * L2));
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw DegenerateFiberError("zero-length reference fiber");
  RefFiberPair f;
  f.L1 = L1 / n1;
  f.L2 = L2 / n2;
  f.Theta12 = f.L1.dot(A_ab * f.L2);
  if (1.0 - f.Theta12 * f.Theta12 < kDegenerateFiberTol)
    throw DegenerateFiberError("reference fibers are parallel");
  return f;
}

PushForward push_forward_fiber(const MetricPoint& m, const Vec2& L) {
  const double lambda_sq = L.dot(m.a_ab * L);
  if (!(lambda_sq > 0.0)) throw InvalidMetricError("non-positive fiber stretch");
  const double lambda = std::sqrt(lambda_sq);
  return {lambda, L / lambda};
}

FiberState fiber_state(const MetricPoint& m, const RefFiberPair& f) {
  const auto p1 = push_forward_fiber(m, f.L1);
  const auto p2 = push_forward_fiber(m, f.L2);
  FiberState fs;
  fs.l1 = p1.l;
  fs.l2 = p2.l;
  fs.lambda1 = p1.lambda;
  fs.lambda2 = p2.lambda;
  fs.theta12 = fs.l1.dot(m.a_ab * fs.l2);
  return fs;
}

AngleMeasures angle_measures(const MetricPoint& m, const RefFiberPair& f) {
  const auto fs = fiber_state(m, f);
  return {fs.theta12, fs.theta12 - f.Theta12};
}

StructuralTensors structural_tensors(const MetricPoint& /*m*/, const FiberState& fs) {
  const Mat2 l11 = dyad(fs.l1, fs.l1);
  const Mat2 l22 = dyad(fs.l2, fs.l2);
  const Mat2 l12 = sym_dyad(fs.l1, fs.l2);
  const Mat2 lsum = l11 + l22;
  const double th = fs.theta12;

  StructuralTensors st;
  st.g12 = l12 - 0.5 * th * lsum;
  st.g12_grad = (-0.5) * outer(l12, lsum) + (-0.5) * outer(lsum, st.g12) +
                (0.5 * th) * (outer(l11, l11) + outer(l22, l22));
  return st;
}

Mat2 length_preserving_metric(const Mat2& A_ab, const RefFiberPair& f, double angle_cosine) {
  const auto dual = dual_fibers(f);
  // Covariant components of the dual fibers, L^I_a = A_ab L^{I b}.
  const Vec2 d1 = A_ab * dual[0];
  const Vec2 d2 = A_ab * dual[1];
  // θ_IJ with unit diagonal
  return dyad(d1, d1) + dyad(d2, d2) + angle_cosine * (dyad(d1, d2) + dyad(d2, d1));
}

AngleSplit strain_tensor_angles(const MetricPoint& m, const Mat2& a_bar, const Mat2& a_hat,
                                const RefFiberPair& f) {
  dual_fibers(f);  // degeneracy guard
  const Mat2 L12 = dyad(f.L1, f.L2);
  AngleSplit s;
  s.phi = ddot(L12, a_bar - m.A_ab);
  s.phi_e = ddot(L12, a_bar - a_hat);
  s.phi_p = ddot(L12, a_hat - m.A_ab);
  return s;
}

SurfaceInvariants surface_invariants(const MetricPoint& m, const RefFiberPair& f,
                                     const CurvaturePoint& c) {
  SurfaceInvariants inv;
  inv.I1 = ddot(m.A_inv, m.a_ab);
  const Mat2 K = c.b_ab - c.B_ab;
  for (int i = 0; i < 2; ++i) {
    const Vec2& L = f.L(i);
    const Mat2 LL = dyad(L, L);
    auto& fi = inv.fiber[i];
    fi.Lambda = ddot(m.a_ab, LL);
    // κn λ² = b_ab L^a L^b, κg λ² = bbar_ab L^a L^b
    fi.K_n = ddot(K, LL);
    fi.K_g = ddot(c.bbar_ab[i] - c.Bbar_ab[i], LL);
    fi.T_g = c.c0[i].dot(K * L);
  }
  return inv;
}

Mat2 picture_frame_map(double theta) {
  const double psi = 0.5 * (std::numbers::pi - theta);
  Mat2 F = Mat2::Zero();
  F(0, 0) = std::numbers::sqrt2 * std::cos(psi);
  F(1, 1) = std::numbers::sqrt2 * std::sin(psi);
  return F;
}

double crosshead_displacement(double theta, double L0) {
  const Vec2 top(0.0, L0 / std::numbers::sqrt2);
  const Mat2 F = picture_frame_map(theta);
  const double current = (F * top - F * (-top)).norm();
  const double reference = 2.0 * top.norm();
  return current - reference;
}

double crosshead_rate(double theta, double L0) {
  // d/dθ of the mapped corner: dF/dθ = dF/dψ · dψ/dθ with dψ/dθ = -1/2
  const double psi = 0.5 * (std::numbers::pi - theta);
  Mat2 dF = Mat2::Zero();
  dF(0, 0) = -std::numbers::sqrt2 * std::sin(psi) * -0.5;
  dF(1, 1) = std::numbers::sqrt2 * std::cos(psi) * -0.5;
  const Vec2 top(0.0, L0 / std::numbers::sqrt2);
  return 2.0 * (dF * top)(1);
}

PictureFrameState picture_frame_metric(double theta, double L0) {
  if (!(theta > 0.0) || theta > std::numbers::pi / 2 + 1e-15)
    throw DomainError("picture frame angle must lie in (0, pi/2]");
  const Mat2 F = picture_frame_map(theta);
  PictureFrameState s;
  s.metric = MetricPoint::make(Mat2::Identity(), F.transpose() * F);
  s.fibers = RefFiberPair::make(Mat2::Identity(), Vec2(1.0, 1.0), Vec2(-1.0, 1.0));
  s.crosshead_displacement = crosshead_displacement(theta, L0);
  return s;
}

}  // namespace fabricplast::kinematics
