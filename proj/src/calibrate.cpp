#include "fabricplast/calibrate.hpp"

#include "fabricplast/analytic.hpp"
#include "fabricplast/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace fabricplast::calibrate {

using material::ElastoplasticParams;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Stage {
  int id;
  std::vector<Param> candidates;
  double lo;
  double hi;
  bool lo_open;
};

const Stage kStages[] = {
    {1, {Param::mu_f, Param::tau_y}, -kInf, 1.0, false},
    {2, {Param::A, Param::a, Param::B, Param::b}, 2.0, 35.0, false},
    {3, {Param::C, Param::c}, 35.0, kInf, true},
};

bool in_window(double g, const Stage& s) {
  return (s.lo_open ? g > s.lo : g >= s.lo) && g <= s.hi;
}

double to_search(Param p, double v) { return log_scaled(p) ? std::log(v) : v; }
double from_search(Param p, double u) { return log_scaled(p) ? std::exp(u) : u; }

}  // namespace

void ExperimentCurve::validate() const {
  if (points.empty()) throw DomainError("experiment curve has no points");
  double prev = -kInf;
  for (const auto& p : points) {
    if (!std::isfinite(p.gamma_deg) || !std::isfinite(p.force_norm))
      throw DomainError("experiment curve holds non-finite values");
    if (p.gamma_deg < 0.0 || p.gamma_deg >= 90.0)
      throw DomainError("shear angles must lie in [0, 90) degrees");
    if (!(p.gamma_deg > prev)) throw DomainError("shear angles must be strictly increasing");
    prev = p.gamma_deg;
  }
}

ExperimentCurve ExperimentCurve::load(const std::string& path, std::string label) {
  ExperimentCurve c{io::load_curve_csv(path), label.empty() ? path : std::move(label)};
  c.validate();
  return c;
}

const char* param_name(Param p) {
  switch (p) {
    case Param::mu_f: return "mu_f";
    case Param::tau_y: return "tau_y";
    case Param::A: return "A";
    case Param::a: return "a";
    case Param::B: return "B";
    case Param::b: return "b";
    case Param::C: return "C";
    case Param::c: return "c";
  }
  return "?";
}

Param parse_param(std::string_view s) {
  for (Param p : kAllParams)
    if (s == param_name(p)) return p;
  throw DomainError("unknown parameter name '" + std::string(s) + "'");
}

double get(const ElastoplasticParams& ep, Param p) {
  switch (p) {
    case Param::mu_f: return ep.mu_f;
    case Param::tau_y: return ep.tau_y;
    case Param::A: return ep.A;
    case Param::a: return ep.a;
    case Param::B: return ep.B;
    case Param::b: return ep.b;
    case Param::C: return ep.C;
    case Param::c: return ep.c;
  }
  return 0.0;
}

void set(ElastoplasticParams& ep, Param p, double v) {
  switch (p) {
    case Param::mu_f: ep.mu_f = v; break;
    case Param::tau_y: ep.tau_y = v; break;
    case Param::A: ep.A = v; break;
    case Param::a: ep.a = v; break;
    case Param::B: ep.B = v; break;
    case Param::b: ep.b = v; break;
    case Param::C: ep.C = v; break;
    case Param::c: ep.c = v; break;
  }
}

bool log_scaled(Param p) { return p == Param::a || p == Param::b || p == Param::c; }

std::map<Param, Bounds> default_bounds() {
  return {{Param::mu_f, {1e-3, 1e3}}, {Param::tau_y, {0.0, 10.0}}, {Param::A, {0.0, 100.0}},
          {Param::a, {1e-5, 10.0}},   {Param::B, {0.0, 10.0}},     {Param::b, {1e-2, 1e3}},
          {Param::C, {0.0, 100.0}},   {Param::c, {1.0, 30.0}}};
}

void FitConfig::validate() const {
  if (free_params.empty()) throw DomainError("no free parameters");
  for (Param p : free_params) {
    const auto it = bounds.find(p);
    if (it == bounds.end())
      throw DomainError(std::string("no bounds for parameter ") + param_name(p));
    if (!(it->second.lo < it->second.hi))
      throw DomainError(std::string("empty bounds for parameter ") + param_name(p));
    if (log_scaled(p) && !(it->second.lo > 0.0))
      throw DomainError(std::string("log-scaled parameter needs a positive lower bound: ") +
                        param_name(p));
  }
  if (max_evals < 1 || passes < 1 || stages < 1 || stages > 3)
    throw DomainError("max_evals and passes must be positive, stages in 1..3");
  if (!(L0 > 0.0) || !(mu0 > 0.0)) throw DomainError("L0 and mu0 must be positive");
}

std::vector<double> model_forces(const ElastoplasticParams& params,
                                 const std::vector<double>& gamma_deg, double L0, double mu0) {
  std::vector<std::size_t> order(gamma_deg.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return gamma_deg[i] < gamma_deg[j]; });
  std::vector<double> thetas;
  thetas.reserve(order.size());
  for (std::size_t i : order) thetas.push_back(analytic::theta_from_gamma_deg(gamma_deg[i]));
  const auto curve = analytic::evaluate_path(thetas, params, L0);
  std::vector<double> out(gamma_deg.size());
  for (std::size_t k = 0; k < order.size(); ++k)
    out[order[k]] = curve.samples[k].frame_force / (L0 * mu0);
  return out;
}

double objective(const ElastoplasticParams& params, const ExperimentCurve& curve, double L0,
                 double mu0) {
  if (curve.points.empty()) return 0.0;
  std::vector<io::CurvePoint> pts = curve.points;
  std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) {
    return x.gamma_deg < y.gamma_deg || (x.gamma_deg == y.gamma_deg && x.force_norm < y.force_norm);
  });
  try {
    params.validate();
    std::vector<double> g;
    g.reserve(pts.size());
    for (const auto& p : pts) g.push_back(p.gamma_deg);
    const auto model = model_forces(params, g, L0, mu0);
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = model[i] - pts[i].force_norm;
      s += d * d;
    }
    const double rms = std::sqrt(s / static_cast<double>(pts.size()));
    return std::isfinite(rms) ? rms : kInf;
  } catch (const Error&) {
    return kInf;
  }
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const std::vector<double>& lo,
                             const std::vector<double>& hi, int max_evals, std::uint64_t seed,
                             double xtol, double ftol) {
  const std::size_t n = x0.size();
  const auto clamp = [&](std::vector<double> x) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
  };

  NelderMeadResult res;
  const auto eval = [&](const std::vector<double>& x) {
    ++res.evals;
    return f(x);
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.75, 1.25);
  std::vector<std::vector<double>> simplex(n + 1, clamp(x0));
  std::vector<double> fv(n + 1);
  fv[0] = eval(simplex[0]);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = simplex[0][i];
    double step = 0.1 * std::max(std::abs(x), 1e-3 * (hi[i] - lo[i])) * unif(rng);
    if (x + step > hi[i]) step = -step;
    simplex[i + 1][i] = std::clamp(x + step, lo[i], hi[i]);
    fv[i + 1] = eval(simplex[i + 1]);
  }

  std::vector<std::size_t> idx(n + 1);
  const auto order = [&] {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> f2;
    for (auto i : idx) {
      s2.push_back(simplex[i]);
      f2.push_back(fv[i]);
    }
    simplex.swap(s2);
    fv.swap(f2);
  };

  const auto combine = [&](const std::vector<double>& c, const std::vector<double>& x, double t) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = c[i] + t * (x[i] - c[i]);
    return clamp(r);
  };

  while (true) {
    order();
    double diam = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        diam = std::max(diam, std::abs(simplex[k][i] - simplex[0][i]));
    const double spread = fv[n] - fv[0];
    if (diam <= xtol || (std::isfinite(spread) && spread <= ftol * std::abs(fv[0]))) {
      res.converged = true;
      break;
    }
    if (res.evals >= max_evals) break;

    std::vector<double> c(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) c[i] += simplex[k][i] / static_cast<double>(n);

    const auto xr = combine(c, simplex[n], -1.0);
    const double fr = eval(xr);
    if (fr < fv[0]) {
      const auto xe = combine(c, simplex[n], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fv[n] = fe;
      } else {
        simplex[n] = xr;
        fv[n] = fr;
      }
      continue;
    }
    if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
      continue;
    }
    bool accepted = false;
    if (fr < fv[n]) {
      const auto xc = combine(c, xr, 0.5);
      const double fc = eval(xc);
      if (fc <= fr) {
        simplex[n] = xc;
        fv[n] = fc;
        accepted = true;
      }
    } else {
      const auto xc = combine(c, simplex[n], 0.5);
      const double fc = eval(xc);
      if (fc < fv[n]) {
        simplex[n] = xc;
        fv[n] = fc;
        accepted = true;
      }
    }
    if (!accepted)
      for (std::size_t k = 1; k <= n; ++k) {
        simplex[k] = combine(simplex[0], simplex[k], 0.5);
        fv[k] = eval(simplex[k]);
      }
  }
  res.x = simplex[0];
  res.f = fv[0];
  return res;
}

FitResult fit(const ElastoplasticParams& initial, const ExperimentCurve& curve,
              const FitConfig& cfg) {
  cfg.validate();
  curve.validate();
  initial.validate();
  for (Param p : cfg.free_params) {
    const auto& b = cfg.bounds.at(p);
    const double v = get(initial, p);
    if (v < b.lo || v > b.hi)
      throw DomainError(std::string("initial value of ") + param_name(p) + " is outside its bounds");
  }

  const auto is_free = [&](Param p) {
    return std::find(cfg.free_params.begin(), cfg.free_params.end(), p) != cfg.free_params.end();
  };

  std::vector<std::pair<int, int>> plan;  // (stage index, pass)
  plan.emplace_back(0, 0);
  for (int pass = 0; pass < cfg.passes; ++pass)
    for (int s = 1; s < cfg.stages; ++s) plan.emplace_back(s, pass);

  FitResult out;
  out.params = initial;
  out.converged = true;
  for (const auto& [si, pass] : plan) {
    if (si >= cfg.stages) continue;
    const Stage& stage = kStages[si];
    StageResult sr;
    sr.stage = stage.id;
    sr.pass = pass;
    for (Param p : stage.candidates)
      if (is_free(p)) sr.params.push_back(p);
    ExperimentCurve window;
    window.label = curve.label;
    for (const auto& p : curve.points)
      if (in_window(p.gamma_deg, stage)) window.points.push_back(p);
    sr.n_points = window.points.size();
    if (!window.points.empty()) {
      sr.gamma_lo = window.points.front().gamma_deg;
      sr.gamma_hi = window.points.back().gamma_deg;
    }
    if (sr.params.empty() || window.points.empty()) {
      sr.skipped = true;
      out.stages.push_back(sr);
      continue;
    }

    const std::size_t n = sr.params.size();
    std::vector<double> x0(n), lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Param p = sr.params[i];
      x0[i] = to_search(p, get(out.params, p));
      lo[i] = to_search(p, cfg.bounds.at(p).lo);
      hi[i] = to_search(p, cfg.bounds.at(p).hi);
    }
    const ElastoplasticParams base = out.params;
    const auto assemble = [&](const std::vector<double>& x) {
      ElastoplasticParams ep = base;
      for (std::size_t i = 0; i < n; ++i) set(ep, sr.params[i], from_search(sr.params[i], x[i]));
      return ep;
    };
    const auto f = [&](const std::vector<double>& x) {
      return objective(assemble(x), window, cfg.L0, cfg.mu0);
    };
    sr.rms_before = objective(base, window, cfg.L0, cfg.mu0);
    const auto nm = nelder_mead(f, x0, lo, hi, cfg.max_evals,
                                cfg.seed + 1000u * static_cast<unsigned>(stage.id) + pass,
                                cfg.xtol, cfg.ftol);
    sr.evals = nm.evals;
    sr.converged = nm.converged;
    if (nm.f <= sr.rms_before) {
      out.params = assemble(nm.x);
      sr.rms_after = nm.f;
    } else {
      sr.rms_after = sr.rms_before;
    }
    out.evals_used += nm.evals;
    out.converged = out.converged && nm.converged;
    out.stages.push_back(sr);
  }
  out.rms_error = objective(out.params, curve, cfg.L0, cfg.mu0);
  return out;
}

std::string report_json(const FitResult& r, const ExperimentCurve& curve, const FitConfig& cfg) {
  nlohmann::ordered_json j;
  j["label"] = curve.label;
  j["rms"] = r.rms_error;
  j["evals"] = r.evals_used;
  j["converged"] = r.converged;
  j["seed"] = cfg.seed;
  j["L0"] = cfg.L0;
  j["mu0"] = cfg.mu0;
  nlohmann::ordered_json params;
  for (Param p : kAllParams) params[param_name(p)] = get(r.params, p);
  j["params"] = params;
  j["free_params"] = nlohmann::json::array();
  for (Param p : cfg.free_params) j["free_params"].push_back(param_name(p));
  j["stages"] = nlohmann::json::array();
  for (const auto& s : r.stages) {
    nlohmann::ordered_json st;
    st["stage"] = s.stage;
    st["pass"] = s.pass;
    st["params"] = nlohmann::json::array();
    for (Param p : s.params) st["params"].push_back(param_name(p));
    st["n_points"] = s.n_points;
    st["gamma_lo"] = s.gamma_lo;
    st["gamma_hi"] = s.gamma_hi;
    st["skipped"] = s.skipped;
    st["rms_before"] = s.rms_before;
    st["rms_after"] = s.rms_after;
    st["evals"] = s.evals;
    st["converged"] = s.converged;
    j["stages"].push_back(st);
  }
  return j.dump(2) + "\n";
}

ExperimentCurve synthesize(const ElastoplasticParams& params, const std::vector<double>& gamma_deg,
                           double noise_rel, std::uint64_t seed, double L0, double mu0) {
  const auto f = model_forces(params, gamma_deg, L0, mu0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  ExperimentCurve c;
  c.label = "synthetic";
  for (std::size_t i = 0; i < f.size(); ++i)
    c.points.push_back({gamma_deg[i], f[i] * (1.0 + noise_rel * n01(rng))});
  return c;
}

}  // namespace fabricplast::calibrate
