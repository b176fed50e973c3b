#include "commands.hpp"

#include "fabricplast/analytic.hpp"
#include "fabricplast/calibrate.hpp"
#include "fabricplast/error.hpp"
#include "fabricplast/fe_membrane.hpp"
#include "fabricplast/io.hpp"
#include "fabricplast/kernels.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace fabricplast::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  const fs::path p = fs::path(dir) / name;
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

analytic::Sampling parse_sampling(const std::string& s) {
  if (s == "cosine") return analytic::Sampling::cosine;
  if (s == "gamma") return analytic::Sampling::gamma;
  throw DomainError("sampling must be 'cosine' or 'gamma'");
}

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
  }
  return out;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  for (const auto& tok : split(s)) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) throw ParseError("bad number '" + tok + "' in list");
    v.push_back(x);
  }
  if (v.empty()) throw ParseError("empty list");
  return v;
}

std::vector<DriverRow> material_point_sweep(const material::ElastoplasticParams& p,
                                            const std::vector<double>& gamma_targets,
                                            double step_deg, const material::NewtonConfig& cfg) {
  if (!(step_deg > 0.0)) throw DomainError("step must be positive");
  constexpr double deg = std::numbers::pi / 180.0;
  std::vector<DriverRow> rows;
  material::PlasticState st;
  rows.push_back({0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, p.mu_f, 0.0, 0.0, false});
  double g0 = 0.0;
  int step = 0;
  for (double target : gamma_targets) {
    if (!(target >= 0.0 && target < 90.0)) throw DomainError("shear angle targets must lie in [0, 90)");
    const double span = target - g0;
    if (span == 0.0) continue;
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) / step_deg - 1e-9)));
    for (int k = 1; k <= n; ++k) {
      const double g = k == n ? target : g0 + span * k / n;
      const double phi = std::sin(g * deg);
      const auto r = material::return_map(phi, st, p, cfg);
      st = r.new_state;
      rows.push_back({++step, g, phi, r.tau, r.phi_e, st.phi_p, st.q, r.dtau_dphi, r.delta_alpha,
                      r.residual, r.is_plastic});
    }
    g0 = target;
  }
  return rows;
}

int cmd_material_point(const MaterialPointConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    const auto pf = io::load_params(cfg.params);
    const auto rows = material_point_sweep(pf.ep, cfg.program, cfg.step_deg);
    auto out = open_out(cfg.out, "material_point.csv");
    out << "step,gamma_deg,phi,tau,phi_e,phi_p,q\n";
    for (const auto& r : rows) {
      out << r.step << ',';
      io::write_row(out, {r.gamma_deg, r.phi, r.tau, r.phi_e, r.phi_p, r.q});
    }
    log << "material-point: " << rows.size() << " rows -> "
        << (fs::path(cfg.out) / "material_point.csv").string() << '\n';
    return 0;
  });
}

int cmd_picture_frame(const PictureFrameConfig& cfg, std::ostream& log) {
  return guarded(log, [&]() -> int {
    if (cfg.mode != "analytic" && cfg.mode != "fe" && cfg.mode != "verify")
      throw DomainError("mode must be analytic, fe or verify");
    const auto pf = io::load_params(cfg.params);
    const double mu0 = cfg.mu0 > 0.0 ? cfg.mu0 : pf.ep.mu_f;
    const double scale = cfg.L0 * mu0;
    auto lp = analytic::LoadProgram::from_gamma_deg(cfg.program, cfg.samples,
                                                    parse_sampling(cfg.sampling));

    if (cfg.mode == "analytic") {
      const auto curve = analytic::run_program(lp, pf.ep, cfg.L0);
      auto out = open_out(cfg.out, "analytic_curve.csv");
      analytic::write_curve(out, curve, scale);
      log << "picture-frame analytic: " << curve.samples.size() << " samples\n";
      return 0;
    }

    if (!(pf.hp.eps_L > 0.0)) throw DomainError("fe and verify modes need eps_L > 0");
    const auto mesh = fe::make_picture_frame_mesh(cfg.mesh, cfg.L0);
    fe::SolverConfig sc;
    sc.steps_per_degree = cfg.steps_per_degree;
    sc.record_fields = cfg.fields || cfg.mode == "verify";
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = fe::solve_picture_frame(mesh, cfg.L0, lp, sc, pf.ep, pf.hp);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    {
      auto out = open_out(cfg.out, "fe_curve.csv");
      analytic::write_curve(out, res.curve, scale);
    }
    if (cfg.fields) {
      auto out = open_out(cfg.out, "fe_fields.csv");
      fe::write_fields(out, res.fields);
    }
    log << "picture-frame fe: " << res.steps.size() << " steps on " << cfg.mesh << "x" << cfg.mesh
        << " mesh in " << secs << " s (kernel " << kernels::name(kernels::active()) << ")\n";
    if (cfg.mode == "fe") return 0;

    const auto ref = analytic::evaluate_path(res.thetas, pf.ep, cfg.L0, lp.theta_start);
    {
      auto out = open_out(cfg.out, "analytic_curve.csv");
      analytic::write_curve(out, ref, scale);
    }
    double tau_max = 0.0, f_max = 0.0, dtau = 0.0, dforce = 0.0;
    for (std::size_t s = 0; s < ref.samples.size(); ++s) {
      tau_max = std::max(tau_max, std::abs(ref.samples[s].tau));
      f_max = std::max(f_max, std::abs(ref.samples[s].frame_force));
      dforce = std::max(dforce, std::abs(res.curve.samples[s].frame_force - ref.samples[s].frame_force));
    }
    for (const auto& f : res.fields)
      dtau = std::max(dtau, std::abs(f.r.tau - ref.samples[f.step].tau));
    const double rel_tau = tau_max > 0.0 ? dtau / tau_max : dtau;
    const double rel_force = f_max > 0.0 ? dforce / f_max : dforce;
    const bool pass = rel_tau <= cfg.verify_tol;

    nlohmann::ordered_json j;
    j["max_rel_tau_discrepancy"] = rel_tau;
    j["max_rel_force_discrepancy"] = rel_force;
    j["tolerance"] = cfg.verify_tol;
    j["steps"] = res.steps.size();
    j["seconds"] = secs;
    j["pass"] = pass;
    auto out = open_out(cfg.out, "verify.json");
    out << j.dump(2) << '\n';
    log << "verify: max relative tau discrepancy " << io::fmt(rel_tau) << ", force "
        << io::fmt(rel_force) << " -> " << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? 0 : 1;
  });
}

int cmd_param_study(const ParamStudyConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    const auto pf = io::load_params(cfg.params);
    const auto which = calibrate::parse_param(cfg.sweep);
    if (cfg.values.empty()) throw DomainError("param-study needs --values");
    const auto lp = analytic::LoadProgram::from_gamma_deg(cfg.program, cfg.samples,
                                                          parse_sampling(cfg.sampling));
    const double mu0 = cfg.mu0 > 0.0 ? cfg.mu0 : pf.ep.mu_f;

    std::vector<analytic::ShearCurve> curves;
    for (double v : cfg.values) {
      auto ep = pf.ep;
      calibrate::set(ep, which, v);
      ep.validate();
      curves.push_back(analytic::run_program(lp, ep, cfg.L0));
    }
    nlohmann::ordered_json index;
    index["parameter"] = cfg.sweep;
    index["runs"] = nlohmann::json::array();
    for (std::size_t k = 0; k < curves.size(); ++k) {
      const std::string name = "study_" + cfg.sweep + "_" + std::to_string(k) + ".csv";
      auto out = open_out(cfg.out, name);
      analytic::write_curve(out, curves[k], cfg.L0 * mu0);
      index["runs"].push_back({{"value", cfg.values[k]}, {"file", name}});
    }
    auto out = open_out(cfg.out, "study_" + cfg.sweep + ".json");
    out << index.dump(2) << '\n';
    log << "param-study " << cfg.sweep << ": " << curves.size() << " curves\n";
    return 0;
  });
}

int cmd_calibrate(const CalibrateConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    const auto pf = io::load_params(cfg.params);
    if (cfg.data.empty()) throw DomainError("calibrate needs --data");
    calibrate::ExperimentCurve curve;
    for (const auto& path : cfg.data) {
      const auto pts = io::load_curve_csv(path);
      curve.points.insert(curve.points.end(), pts.begin(), pts.end());
      curve.label += (curve.label.empty() ? "" : "+") + fs::path(path).stem().string();
    }
    std::sort(curve.points.begin(), curve.points.end(),
              [](const auto& a, const auto& b) { return a.gamma_deg < b.gamma_deg; });
    curve.validate();

    calibrate::FitConfig fc;
    fc.free_params.clear();
    for (const auto& name : cfg.free) fc.free_params.push_back(calibrate::parse_param(name));
    fc.stages = cfg.stages;
    fc.passes = cfg.passes;
    fc.seed = cfg.seed;
    fc.max_evals = cfg.max_evals;
    fc.L0 = cfg.L0;
    fc.mu0 = cfg.mu0;
    const auto r = calibrate::fit(pf.ep, curve, fc);

    const std::string report = calibrate::report_json(r, curve, fc);
    const std::string params = io::params_to_json(r.params, pf.hp);
    open_out(cfg.out, "fitted_params.json") << params;
    open_out(cfg.out, "fit_report.json") << report;
    log << "calibrate: rms " << io::fmt(r.rms_error) << " after " << r.evals_used
        << " evaluations" << (r.converged ? "" : " (not converged)") << '\n';
    return 0;
  });
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> from_file;
  std::size_t insert_at = std::string::npos;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[++i];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
    else {
      out.push_back(args[i]);
      continue;
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid config JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("config file must hold a JSON object");
    for (const auto& [key, v] : j.items()) {
      const std::string flag = "--" + key;
      if (v.is_boolean()) {
        from_file.push_back(flag + "=" + (v.get<bool>() ? "true" : "false"));
      } else if (v.is_array()) {
        std::string joined;
        for (const auto& e : v) {
          if (!joined.empty()) joined += ',';
          joined += e.is_string() ? e.get<std::string>() : e.dump();
        }
        from_file.push_back(flag);
        from_file.push_back(joined);
      } else {
        from_file.push_back(flag);
        from_file.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    }
    if (insert_at == std::string::npos) insert_at = out.size();
  }
  if (insert_at != std::string::npos)
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(insert_at), from_file.begin(),
               from_file.end());
  return out;
}

}  // namespace fabricplast::cli
