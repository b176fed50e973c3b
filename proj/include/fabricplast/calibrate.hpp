#pragma once

//! \file calibrate.hpp
//! \brief Staged, bounded Nelder-Mead fit of the yield-function constants to
//! picture-frame shear curves (normalized force versus shear angle).

#include "fabricplast/io.hpp"
#include "fabricplast/material.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fabricplast::calibrate {

struct ExperimentCurve {
  std::vector<io::CurvePoint> points;
  std::string label;

  /// γ in [0, 90) strictly increasing, forces finite, at least one point.
  void validate() const;
  static ExperimentCurve load(const std::string& path, std::string label = {});
};

enum class Param { mu_f, tau_y, A, a, B, b, C, c };

inline constexpr Param kAllParams[] = {Param::mu_f, Param::tau_y, Param::A, Param::a,
                                       Param::B,    Param::b,     Param::C, Param::c};

const char* param_name(Param p);
/// Throws DomainError for unknown names.
Param parse_param(std::string_view s);
double get(const material::ElastoplasticParams& ep, Param p);
void set(material::ElastoplasticParams& ep, Param p, double v);
/// a, b and c are searched in log space.
bool log_scaled(Param p);

struct Bounds {
  double lo;
  double hi;
};

std::map<Param, Bounds> default_bounds();

struct FitConfig {
  std::vector<Param> free_params{Param::A, Param::a, Param::B, Param::b, Param::C, Param::c};
  std::map<Param, Bounds> bounds = default_bounds();
  int max_evals = 3000;  ///< per stage run
  std::uint64_t seed = 1;
  double L0 = 1.0;
  double mu0 = 1.0;  ///< force normalization F / (L0 mu0)
  int stages = 3;    ///< run stages 1..stages
  int passes = 3;    ///< repetitions of stages 2 and 3
  double xtol = 1e-9;
  double ftol = 1e-12;

  void validate() const;
};

struct StageResult {
  int stage = 0;
  int pass = 0;
  std::vector<Param> params;
  double gamma_lo = 0.0;
  double gamma_hi = 0.0;
  std::size_t n_points = 0;
  double rms_before = 0.0;
  double rms_after = 0.0;
  int evals = 0;
  bool converged = false;
  bool skipped = false;
};

struct FitResult {
  material::ElastoplasticParams params;
  double rms_error = 0.0;
  int evals_used = 0;
  bool converged = false;
  std::vector<StageResult> stages;
};

/// Root-mean-square deviation between the model's normalized frame force
/// under monotone loading and the data. Infinite for inadmissible parameters
/// or solver failures.
double objective(const material::ElastoplasticParams& params, const ExperimentCurve& curve,
                 double L0, double mu0 = 1.0);

/// Model normalized force at the given shear angles (any order).
std::vector<double> model_forces(const material::ElastoplasticParams& params,
                                 const std::vector<double>& gamma_deg, double L0, double mu0);

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evals = 0;
  bool converged = false;
};

/// Box-constrained Nelder-Mead: candidates are clamped into [lo, hi]. The
/// initial simplex steps are drawn from a generator seeded with `seed`.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const std::vector<double>& lo,
                             const std::vector<double>& hi, int max_evals, std::uint64_t seed,
                             double xtol, double ftol);

/// Stage 1: mu_f (and tau_y if free) on γ <= 1°. Stage 2: A, a, B, b on
/// 2° <= γ <= 35°. Stage 3: C, c on γ > 35°. Only free parameters move.
/// Throws DomainError when initial is outside the bounds.
FitResult fit(const material::ElastoplasticParams& initial, const ExperimentCurve& curve,
              const FitConfig& cfg);

std::string report_json(const FitResult& r, const ExperimentCurve& curve, const FitConfig& cfg);

/// Data generated from params at the given angles with multiplicative
/// Gaussian noise of relative size noise_rel.
ExperimentCurve synthesize(const material::ElastoplasticParams& params,
                           const std::vector<double>& gamma_deg, double noise_rel,
                           std::uint64_t seed, double L0, double mu0 = 1.0);

}  // namespace fabricplast::calibrate
