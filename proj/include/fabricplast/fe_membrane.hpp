#pragma once

//! \file fe_membrane.hpp
//! \brief Flat nonlinear membrane elements (bilinear quadrilaterals) and a
//! Dirichlet-driven picture-frame solver.
//!
//! Reference frame: the L0 x L0 frame has its edges along the two fiber
//! families, which lie on the Cartesian diagonals, so the mesh is a square
//! rotated by 45 degrees with the pull-axis corners at (0, ±L0/√2).

#include "fabricplast/analytic.hpp"
#include "fabricplast/material.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <vector>

namespace fabricplast::fe {

struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 4>> elements;  ///< counter-clockwise
  std::vector<int> boundary_nodes;            ///< sorted

  /// Throws ElementInversionError when a reference Jacobian is not positive
  /// at some quadrature point, DomainError for bad connectivity.
  void validate(int quadrature_order = 2) const;
};

/// n x n element mesh of the rotated L0 x L0 frame.
Mesh make_picture_frame_mesh(int n, double L0);

/// Cartesian fiber directions (e1 ± e2)/√2.
std::array<Vec2, 2> diagonal_fibers();

struct GaussPointState {
  material::PlasticState plastic;
};

struct SolverConfig {
  double steps_per_degree = 2.0;
  double newton_tol = 1e-11;  ///< on |R_free| / (mu_f L0)
  int newton_max_iter = 25;
  int quadrature_order = 2;
  int max_bisections = 5;
  bool record_fields = true;

  void validate() const;
};

/// Material response at one quadrature point.
struct GaussPointResult {
  double theta12 = 0.0;
  double tau = 0.0;
  double phi_e = 0.0;
  double phi_p = 0.0;
  double q = 0.0;
};

using ElementVector = Eigen::Matrix<double, 8, 1>;
using ElementMatrix = Eigen::Matrix<double, 8, 8>;

struct ElementOutput {
  ElementVector residual = ElementVector::Zero();
  ElementMatrix tangent = ElementMatrix::Zero();
  std::vector<material::PlasticState> trial;
  std::vector<GaussPointResult> gp;
};

/// Gauss-Legendre points and weights on [-1, 1], order 1..3.
void gauss_rule(int order, std::vector<double>& pts, std::vector<double>& wts);

/// Internal force vector ∫ τ^{ab} N_{,a} a_b dA and its consistent tangent
/// for one element. `committed` holds one state per quadrature point and is
/// only read. Throws ElementInversionError for non-positive reference or
/// current Jacobians.
ElementOutput element_residual_and_tangent(const std::array<Vec2, 4>& X,
                                           const std::array<Vec2, 4>& x,
                                           std::span<const GaussPointState> committed,
                                           const material::ElastoplasticParams& ep,
                                           const material::HyperelasticParams& hp,
                                           int quadrature_order = 2,
                                           const std::array<Vec2, 2>& fibers = diagonal_fibers());

struct FieldRecord {
  int step = 0;
  int gp_index = 0;
  GaussPointResult r;
};

struct StepInfo {
  int step = 0;
  double theta = 0.0;
  int iterations = 0;
  int bisections = 0;
  std::vector<double> residuals;  ///< scaled residual norm per Newton iteration
};

struct Result {
  analytic::ShearCurve curve;  ///< Gauss-point averages, reaction force
  std::vector<double> thetas;  ///< frame angle per output step (step 0 first)
  std::vector<GaussPointState> states;
  std::vector<FieldRecord> fields;
  std::vector<StepInfo> steps;
};

/// Quasi-static picture-frame run: every boundary node follows the frame
/// map, interior nodes are solved for. Steps are uniform in θ within each
/// program interval. A failing step is retried with halved increments up to
/// max_bisections times, then SolverError carries the step index.
Result solve_picture_frame(const Mesh& mesh, double L0, const analytic::LoadProgram& program,
                           const SolverConfig& cfg, const material::ElastoplasticParams& ep,
                           const material::HyperelasticParams& hp);

/// `step,gp_index,theta12,tau,phi_e,phi_p,q`
void write_fields(std::ostream& os, const std::vector<FieldRecord>& fields);

}  // namespace fabricplast::fe
