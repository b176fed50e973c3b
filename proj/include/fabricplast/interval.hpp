#pragma once

//! \file interval.hpp
//! \brief One loading interval of the closed-form picture-frame solution.

#include "fabricplast/material_params.hpp"

namespace fabricplast::analytic {

/// Bookkeeping carried from one loading interval to the next.
struct IntervalState {
  double tau0 = 0.0;
  double alpha_p0 = 0.0;
  double q0 = 0.0;
  double Q0 = 0.0;

  bool operator==(const IntervalState&) const = default;
};

struct IntervalSolution {
  double tau = 0.0;
  double phi_p_bar = 0.0;
  double q = 0.0;
  bool plastic = false;
  int iterations = 0;
  double residual = 0.0;
};

/// φ_y = (f_iso(q0) + |τ0|) / μ_f, the yield angle after a load reversal
/// (and of the virgin state).
double yield_angle(const IntervalState& is, const material::ElastoplasticParams& p);

/// Yield angle for a given loading direction (sign of φ̄):
/// max(0, (f_iso(q0) − h τ0) / μ_f). Equals the one-argument form when τ0
/// opposes the direction or vanishes.
double yield_angle(const IntervalState& is, double direction,
                   const material::ElastoplasticParams& p);

/// Stress, plastic angle increment and hardening variable at relative angle
/// phi_bar (cosine change since the start of the interval).
/// Throws ConvergenceError.
IntervalSolution interval_solve(double phi_bar, const IntervalState& is,
                                const material::ElastoplasticParams& p,
                                const material::NewtonConfig& cfg = {});

/// Initial conditions of the next interval.
IntervalState roll_over(const IntervalState& is, const IntervalSolution& end);

}  // namespace fabricplast::analytic
