#pragma once

//! \file kinematics.hpp
//! \brief Surface metrics, fiber push-forward, fiber-angle measures and their
//! structural tensors, evaluated pointwise in curvilinear component form.

#include "fabricplast/tensor.hpp"

#include <array>

namespace fabricplast::kinematics {

/// Parallel-fiber threshold on det[Θ_IJ] = 1 - Θ12².
inline constexpr double kDegenerateFiberTol = 1e-10;

/// Covariant reference metric A_ab, current metric a_ab and A^ab.
struct MetricPoint {
  Mat2 A_ab = Mat2::Identity();
  Mat2 a_ab = Mat2::Identity();
  Mat2 A_inv = Mat2::Identity();

  /// Validates symmetry and positive definiteness of both metrics.
  /// Throws InvalidMetricError otherwise.
  static MetricPoint make(const Mat2& A_ab, const Mat2& a_ab);

  /// Metric point built from reference and current tangent vectors (columns).
  template <int Rows>
  static MetricPoint from_tangents(const Eigen::Matrix<double, Rows, 2>& G,
                                   const Eigen::Matrix<double, Rows, 2>& g) {
    return make(G.transpose() * G, g.transpose() * g);
  }
};

/// Reference fiber pair: contravariant components L_I^a with unit reference
/// length and the reference angle cosine Θ12.
struct RefFiberPair {
  Vec2 L1 = Vec2::UnitX();
  Vec2 L2 = Vec2::UnitY();
  double Theta12 = 0.0;

  /// Normalizes L1, L2 against A_ab. Throws DegenerateFiberError when the
  /// fibers are parallel.
  static RefFiberPair make(const Mat2& A_ab, const Vec2& L1, const Vec2& L2);

  const Vec2& L(int i) const { return i == 0 ? L1 : L2; }
};

/// Current fiber pair.
struct FiberState {
  Vec2 l1 = Vec2::UnitX();
  Vec2 l2 = Vec2::UnitY();
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double theta12 = 0.0;

  const Vec2& l(int i) const { return i == 0 ? l1 : l2; }
  double lambda(int i) const { return i == 0 ? lambda1 : lambda2; }
};

/// g12^{ab} = dθ12/da_ab and g12^{abcd} = dg12^{ab}/da_cd.
struct StructuralTensors {
  Mat2 g12 = Mat2::Zero();
  Tensor4 g12_grad;
};

/// Out-of-plane curvatures (b, B) and, per fiber, in-plane fiber curvatures
/// (bbar, Bbar) and reference fiber directors c0^a.
struct CurvaturePoint {
  Mat2 b_ab = Mat2::Zero();
  Mat2 B_ab = Mat2::Zero();
  std::array<Mat2, 2> bbar_ab{Mat2::Zero(), Mat2::Zero()};
  std::array<Mat2, 2> Bbar_ab{Mat2::Zero(), Mat2::Zero()};
  std::array<Vec2, 2> c0{Vec2::Zero(), Vec2::Zero()};
};

struct PushForward {
  double lambda;
  Vec2 l;
};

struct AngleMeasures {
  double theta12;
  double phi;
};

struct AngleSplit {
  double phi;
  double phi_e;
  double phi_p;
};

struct FiberInvariants {
  double Lambda;  ///< squared fiber stretch a_ab L^a L^b
  double T_g;     ///< change of geodesic torsion
  double K_n;     ///< change of normal curvature
  double K_g;     ///< change of geodesic curvature
};

struct SurfaceInvariants {
  double I1;
  std::array<FiberInvariants, 2> fiber;
};

struct PictureFrameState {
  MetricPoint metric;
  RefFiberPair fibers;
  double crosshead_displacement;
};

/// λ = sqrt(L a L), l = L / λ.
PushForward push_forward_fiber(const MetricPoint& m, const Vec2& L);

FiberState fiber_state(const MetricPoint& m, const RefFiberPair& f);

/// θ12 = l1 a l2 and φ = θ12 - Θ12.
AngleMeasures angle_measures(const MetricPoint& m, const RefFiberPair& f);

StructuralTensors structural_tensors(const MetricPoint& m, const FiberState& fs);

/// Fiber-length-preserving metric L^{IJ}_ab θ_IJ for a given angle cosine,
/// with L^I the dual reference fibers. Gives ā_ab for θ12 and â_ab for θ̂12.
Mat2 length_preserving_metric(const Mat2& A_ab, const RefFiberPair& f, double angle_cosine);

/// Angle split evaluated as invariants of strain tensors built from ā_ab
/// and â_ab. Throws DegenerateFiberError for parallel fibers.
AngleSplit strain_tensor_angles(const MetricPoint& m, const Mat2& a_bar, const Mat2& a_hat,
                                const RefFiberPair& f);

SurfaceInvariants surface_invariants(const MetricPoint& m, const RefFiberPair& f,
                                     const CurvaturePoint& c);

/// Homogeneous picture-frame deformation at frame angle theta (radians) of an
/// L0 x L0 frame whose edges are aligned with the fibers. The reference chart
/// is Cartesian (A = I) and the fibers lie on the diagonals.
/// Throws DomainError unless 0 < theta <= pi/2.
PictureFrameState picture_frame_metric(double theta, double L0);

/// Map x = sqrt(2) diag(cos ψ, sin ψ) X with ψ = (pi - theta)/2.
Mat2 picture_frame_map(double theta);

/// Change in corner-to-corner distance along the pull axis (e2).
double crosshead_displacement(double theta, double L0);

/// d(crosshead_displacement)/d(theta).
double crosshead_rate(double theta, double L0);

}  // namespace fabricplast::kinematics
