#pragma once

//! \file material_params.hpp
//! \brief Material constants, internal variables and the scalar
//! hardening / return-mapping functions. Free of linear-algebra types.

namespace fabricplast::material {

/// Shear modulus and the seven yield-function constants.
struct ElastoplasticParams {
  double mu_f = 1.0;
  double tau_y = 0.0;
  double A = 0.0;
  double a = 1.0;
  double B = 0.0;
  double b = 1.0;
  double C = 0.0;
  double c = 1.0;

  /// Builds and validates a parameter set. Throws InvalidParameterError when
  /// mu_f <= 0, tau_y < 0, C < 0, c < 1, or f_iso' is not positive on
  /// q in [0, kAdmissibleQMax].
  static ElastoplasticParams make(double mu_f, double tau_y, double A, double a, double B,
                                  double b, double C, double c);

  /// Re-runs the constructor checks on an existing value.
  void validate() const;

  bool operator==(const ElastoplasticParams&) const = default;
};

/// Upper end of the q range on which f_iso' > 0 is enforced.
inline constexpr double kAdmissibleQMax = 1.5;
/// Sampling step used by the admissibility check.
inline constexpr double kAdmissibleQStep = 1e-3;

/// Stretch, bending and torsion stiffnesses.
struct HyperelasticParams {
  double eps_L = 0.0;
  double beta_n = 0.0;
  double beta_g = 0.0;
  double beta_tau = 0.0;

  void validate() const;
  bool operator==(const HyperelasticParams&) const = default;
};

/// Internal variables of one material point.
struct PlasticState {
  double phi_p = 0.0;    ///< plastic angle change
  double q = 0.0;        ///< hardening variable
  double alpha_p = 0.0;  ///< accumulated plastic angle

  bool operator==(const PlasticState&) const = default;
};

struct NewtonConfig {
  double tol = 1e-12;  ///< relative to max(mu_f, f_iso(q_old))
  int max_iter = 50;
};

/// Output of the predictor-corrector update.
struct StressReturn {
  double tau = 0.0;
  double phi_e = 0.0;
  PlasticState new_state;
  double dtau_dphi = 0.0;  ///< algorithmic tangent dτ/dφ
  bool is_plastic = false;
  double delta_alpha = 0.0;
  double residual = 0.0;  ///< |g(Δα)| at exit (zero for elastic steps)
  int iterations = 0;
};

/// τ_y + A asinh(a q) + B tanh(b q) + C q^c. Throws DomainError for q < 0.
double f_iso(double q, const ElastoplasticParams& p);

/// df_iso/dq. Throws DomainError for q < 0.
double f_iso_prime(double q, const ElastoplasticParams& p);

/// |τ| - f_iso(q).
double yield_function(double tau, double q, const ElastoplasticParams& p);

/// g(Δα) = |τ_trial| - μ_f Δα - f_iso(q_old + Δα).
double return_residual(double abs_tau_trial, double q_old, double delta_alpha,
                       const ElastoplasticParams& p);

/// Backward-Euler return mapping for the total angle change phi_new starting
/// from the committed state_old. Pure: state_old is never modified.
/// Throws ConvergenceError / ConsistencyError.
StressReturn return_map(double phi_new, const PlasticState& state_old,
                        const ElastoplasticParams& p, const NewtonConfig& cfg = {});

}  // namespace fabricplast::material
