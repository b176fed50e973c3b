#include "commands.hpp"

#include "fabricplast/kernels.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

using namespace fabricplast;

namespace {

// "1,2,3" -> vector
void list_option(CLI::App& app, const std::string& flag, std::vector<double>& target,
                 const std::string& help) {
  app.add_option_function<std::string>(
      flag,
      [&target, flag](const std::string& s) {
        try {
          target = cli::parse_list(s);
        } catch (const std::exception& e) {
          throw CLI::ValidationError(flag, e.what());
        }
      },
      help);
}

void string_list_option(CLI::App& app, const std::string& flag, std::vector<std::string>& target,
                        const std::string& help) {
  app.add_option_function<std::string>(
      flag, [&target](const std::string& s) { target = cli::split(s); }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fiber-angle elastoplasticity for woven fabrics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string kernel;
  app.add_option("--kernel", kernel, "Kernel backend (scalar, avx2)");

  cli::MaterialPointConfig mp;
  auto* c_mp = app.add_subcommand("material-point", "Incremental return-map sweep at one point");
  c_mp->add_option("--params", mp.params, "Parameter JSON")->required()->check(CLI::ExistingFile);
  list_option(*c_mp, "--program", mp.program, "Shear-angle targets in degrees, e.g. 50,20,50");
  c_mp->add_option("--step", mp.step_deg, "Shear-angle increment in degrees");
  c_mp->add_option("--out", mp.out, "Output directory");
  c_mp->add_option("--config", "JSON file with flag values");

  cli::PictureFrameConfig pfc;
  auto* c_pf = app.add_subcommand("picture-frame", "Picture-frame test (analytic, FE or both)");
  c_pf->add_option("--params", pfc.params, "Parameter JSON")->required()->check(CLI::ExistingFile);
  list_option(*c_pf, "--program", pfc.program, "Shear-angle targets in degrees");
  c_pf->add_option("--mode", pfc.mode, "analytic | fe | verify")
      ->check(CLI::IsMember({"analytic", "fe", "verify"}));
  c_pf->add_option_function<std::string>(
      "--mesh",
      [&pfc](const std::string& s) {
        const auto x = s.find_first_of("xX");
        int a = 0, b = 0;
        try {
          a = std::stoi(s.substr(0, x));
          b = x == std::string::npos ? a : std::stoi(s.substr(x + 1));
        } catch (const std::exception&) {
          throw CLI::ValidationError("--mesh", "expected NxN");
        }
        if (a != b) throw CLI::ValidationError("--mesh", "only square NxN meshes are supported");
        pfc.mesh = a;
      },
      "Mesh size NxN");
  c_pf->add_option("--L0", pfc.L0, "Frame length");
  c_pf->add_option("--mu0", pfc.mu0, "Stress measure for force normalization (default mu_f)");
  c_pf->add_option("--samples", pfc.samples, "Analytic samples per interval");
  c_pf->add_option("--sampling", pfc.sampling, "cosine | gamma")
      ->check(CLI::IsMember({"cosine", "gamma"}));
  c_pf->add_option("--steps-per-degree", pfc.steps_per_degree, "FE load steps per degree");
  c_pf->add_option("--tol", pfc.verify_tol, "Verification tolerance on relative tau");
  c_pf->add_flag("--fields,!--no-fields", pfc.fields, "Write the Gauss-point field dump");
  c_pf->add_option("--out", pfc.out, "Output directory");
  c_pf->add_option("--config", "JSON file with flag values");

  cli::ParamStudyConfig ps;
  auto* c_ps = app.add_subcommand("param-study", "Sweep one yield-function parameter");
  c_ps->add_option("--params", ps.params, "Parameter JSON")->required()->check(CLI::ExistingFile);
  list_option(*c_ps, "--program", ps.program, "Shear-angle targets in degrees");
  c_ps->add_option("--sweep", ps.sweep, "Parameter name (mu_f, tau_y, A, a, B, b, C, c)")
      ->required();
  list_option(*c_ps, "--values", ps.values, "Comma-separated parameter values");
  c_ps->add_option("--L0", ps.L0, "Frame length");
  c_ps->add_option("--mu0", ps.mu0, "Stress measure for force normalization (default mu_f)");
  c_ps->add_option("--samples", ps.samples, "Samples per interval");
  c_ps->add_option("--sampling", ps.sampling, "cosine | gamma")
      ->check(CLI::IsMember({"cosine", "gamma"}));
  c_ps->add_option("--out", ps.out, "Output directory");
  c_ps->add_option("--config", "JSON file with flag values");

  cli::CalibrateConfig cc;
  auto* c_cal = app.add_subcommand("calibrate", "Staged fit to a shear curve");
  c_cal->add_option("--params", cc.params, "Initial parameter JSON")->required();
  string_list_option(*c_cal, "--data", cc.data, "gamma_deg,force_norm CSV file(s)");
  string_list_option(*c_cal, "--free", cc.free, "Free parameters, e.g. A,a,C,c");
  c_cal->add_option("--stages", cc.stages, "Run stages 1..N")->check(CLI::Range(1, 3));
  c_cal->add_option("--passes", cc.passes, "Repetitions of stages 2 and 3");
  c_cal->add_option("--seed", cc.seed, "Seed of the simplex initialization");
  c_cal->add_option("--max-evals", cc.max_evals, "Objective evaluations per stage run");
  c_cal->add_option("--L0", cc.L0, "Frame length");
  c_cal->add_option("--mu0", cc.mu0, "Force normalization stress");
  c_cal->add_option("--out", cc.out, "Output directory");
  c_cal->add_option("--config", "JSON file with flag values");

  std::vector<std::string> args;
  try {
    std::vector<std::string> raw(argv + 1, argv + argc);
    args = cli::expand_config(raw);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (!kernel.empty()) kernels::set_active(kernels::parse_backend(kernel));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (*c_mp) return cli::cmd_material_point(mp, std::cout);
  if (*c_pf) return cli::cmd_picture_frame(pfc, std::cout);
  if (*c_ps) return cli::cmd_param_study(ps, std::cout);
  return cli::cmd_calibrate(cc, std::cout);
}
