#pragma once

// Subcommand implementations shared by the fabricplast executable and the
// test suites. Every command returns a process exit code and reports
// problems on `log`.

#include "fabricplast/material.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fabricplast::cli {

/// "50,20,50" -> {50, 20, 50}. Throws ParseError.
std::vector<double> parse_list(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep = ',');

struct DriverRow {
  int step;
  double gamma_deg;
  double phi;
  double tau;
  double phi_e;
  double phi_p;
  double q;
  double dtau_dphi;
  double delta_alpha;
  double residual;
  bool plastic;
};

/// Incremental return-map sweep: φ = sin γ, γ moves from 0 through the
/// targets (degrees) in uniform increments no larger than step_deg, the
/// state being committed after every step. Row 0 is the start state.
std::vector<DriverRow> material_point_sweep(const material::ElastoplasticParams& p,
                                            const std::vector<double>& gamma_targets,
                                            double step_deg,
                                            const material::NewtonConfig& cfg = {});

struct MaterialPointConfig {
  std::string params;
  std::vector<double> program{50.0, 20.0, 50.0};
  double step_deg = 0.01;
  std::string out = ".";
};

struct PictureFrameConfig {
  std::string params;
  std::vector<double> program{50.0, 20.0, 50.0};
  std::string mode = "analytic";  // analytic | fe | verify
  int mesh = 8;
  double L0 = 1.0;
  double mu0 = 0.0;  // 0: use mu_f
  int samples = 100;
  std::string sampling = "cosine";  // cosine | gamma
  double steps_per_degree = 2.0;
  double verify_tol = 1e-9;
  bool fields = true;
  std::string out = ".";
};

struct ParamStudyConfig {
  std::string params;
  std::vector<double> program{50.0};
  std::string sweep;
  std::vector<double> values;
  double L0 = 1.0;
  double mu0 = 0.0;
  int samples = 200;
  std::string sampling = "gamma";
  std::string out = ".";
};

struct CalibrateConfig {
  std::string params;
  std::vector<std::string> data;
  std::vector<std::string> free{"A", "a", "B", "b", "C", "c"};
  int stages = 3;
  int passes = 3;
  std::uint64_t seed = 1;
  int max_evals = 3000;
  double L0 = 1.0;
  double mu0 = 1.0;
  std::string out = ".";
};

int cmd_material_point(const MaterialPointConfig& cfg, std::ostream& log);
int cmd_picture_frame(const PictureFrameConfig& cfg, std::ostream& log);
int cmd_param_study(const ParamStudyConfig& cfg, std::ostream& log);
int cmd_calibrate(const CalibrateConfig& cfg, std::ostream& log);

/// Expands `--config file.json` into flags placed before the remaining
/// arguments, so explicit flags override the file. Keys are flag names
/// without dashes; arrays are joined with commas; booleans become --flag=true|false.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace fabricplast::cli
