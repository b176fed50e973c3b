#pragma once

//! \file material.hpp
//! \brief Fiber-angle elastoplasticity at one material point: isotropic
//! hardening, yield function, backward-Euler return mapping, angle stress and
//! its algorithmic tangent, and the hyperelastic stretch/bending terms.
//!
//! Stress-like quantities are force per reference length (N/mm in the
//! shipped parameter files). Angle quantities are differences of fiber angle
//! cosines and therefore dimensionless.

#include "fabricplast/kinematics.hpp"
#include "fabricplast/material_params.hpp"
#include "fabricplast/tensor.hpp"

namespace fabricplast::material {

struct AngleStress {
  Mat2 tau_ab;
  Tensor4 c_ab;
};

/// τ_a^{ab} = 2 τ g12^{ab},  c_a = 4 (dτ/dφ) g12 ⊗ g12 + 4 τ g12^{abcd}.
AngleStress angle_stress_and_tangent(const StressReturn& sr,
                                     const kinematics::StructuralTensors& st);

/// Total membrane stress: fiber stretch terms plus the angle stress.
AngleStress membrane_stress(const kinematics::MetricPoint& m, const kinematics::RefFiberPair& f,
                            const StressReturn& sr, const kinematics::StructuralTensors& st,
                            const HyperelasticParams& hp);

struct MomentResponse {
  Mat2 M0;
  Mat2 Mbar0;
  Tensor4 f_tan;
  Tensor4 fbar_tan;
};

MomentResponse moments_and_bending_tangents(const kinematics::MetricPoint& m,
                                            const kinematics::RefFiberPair& f,
                                            const kinematics::CurvaturePoint& c,
                                            const HyperelasticParams& hp);

/// Stored energy per reference area for a given elastic angle.
double strain_energy(const kinematics::MetricPoint& m, const kinematics::RefFiberPair& f,
                     const kinematics::CurvaturePoint& c, double phi_e,
                     const HyperelasticParams& hp, const ElastoplasticParams& ep);

}  // namespace fabricplast::material
