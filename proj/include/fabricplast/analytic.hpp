#pragma once

//! \file analytic.hpp
//! \brief Interval-wise closed-form picture-frame solution for multi-cycle
//! loading programs, with the yield surface expanded by the carried-over
//! stress at the start of every interval.

#include "fabricplast/interval.hpp"
#include "fabricplast/material.hpp"

#include <iosfwd>
#include <numbers>
#include <vector>

namespace fabricplast::analytic {

enum class Sampling { cosine, gamma };

struct LoadProgram {
  std::vector<double> targets;  ///< frame angles θ in radians
  int samples_per_interval = 100;
  double theta_start = std::numbers::pi / 2;
  Sampling sampling = Sampling::cosine;

  /// Program from shear-angle targets γ in degrees (θ = 90° − γ).
  static LoadProgram from_gamma_deg(const std::vector<double>& gammas, int samples = 100,
                                    Sampling sampling = Sampling::cosine);

  /// Throws DomainError for θ outside (0, π/2], repeated consecutive targets
  /// or samples_per_interval < 1.
  void validate() const;
};

struct CurveSample {
  double gamma_deg = 0.0;
  double theta12 = 0.0;
  double tau = 0.0;
  double phi_e = 0.0;
  double phi_p = 0.0;
  double q = 0.0;
  double frame_force = 0.0;  ///< not normalized
};

struct ShearCurve {
  std::vector<CurveSample> samples;
};

double gamma_deg_from_theta(double theta);
double theta_from_gamma_deg(double gamma_deg);

/// Interval-by-interval evaluation of a load program. The first sample is the
/// start state; every interval contributes samples_per_interval samples, the
/// last one exactly at the target.
ShearCurve run_program(const LoadProgram& lp, const material::ElastoplasticParams& p, double L0);

/// Analytic solution at an arbitrary sequence of frame angles starting from
/// the virgin state at theta_start. A new interval starts wherever the
/// loading direction reverses.
ShearCurve evaluate_path(const std::vector<double>& thetas,
                         const material::ElastoplasticParams& p, double L0,
                         double theta_start = std::numbers::pi / 2);

/// Crosshead force conjugate to the crosshead displacement:
/// F dd = L0² τ d(cos θ).
double frame_force(double tau, double theta, double L0);

/// `gamma_deg,theta12,tau,phi_e,phi_p,q,frame_force_normalized` with the
/// force divided by force_scale (L0 μ0).
void write_curve(std::ostream& os, const ShearCurve& c, double force_scale);

}  // namespace fabricplast::analytic
