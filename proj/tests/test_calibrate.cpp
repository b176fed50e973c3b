#include "fabricplast/calibrate.hpp"
#include "fabricplast/error.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace fabricplast;
using namespace fabricplast::calibrate;
using material::ElastoplasticParams;

namespace {

ElastoplasticParams fabric_set() {
  return ElastoplasticParams::make(5, 1e-4, 8.8, 0.0024, 0.0028, 65, 1, 11);
}

std::vector<double> grid(double step, double last) {
  std::vector<double> g;
  for (double x = step; x <= last + 1e-12; x += step) g.push_back(x);
  return g;
}

}  // namespace

TEST(Curve, Validation) {
  ExperimentCurve c;
  EXPECT_THROW(c.validate(), DomainError);
  c.points = {{1.0, 0.1}, {2.0, 0.2}};
  EXPECT_NO_THROW(c.validate());
  c.points = {{2.0, 0.1}, {1.0, 0.2}};
  EXPECT_THROW(c.validate(), DomainError);
  c.points = {{1.0, 0.1}, {90.0, 0.2}};
  EXPECT_THROW(c.validate(), DomainError);
  EXPECT_THROW(ExperimentCurve::load("/nonexistent.csv"), ParseError);
}

TEST(Params, NamesRoundTrip) {
  auto p = fabric_set();
  for (Param q : kAllParams) {
    EXPECT_EQ(parse_param(param_name(q)), q);
    set(p, q, 0.5);
    EXPECT_EQ(get(p, q), 0.5);
  }
  EXPECT_THROW(parse_param("D"), DomainError);
  EXPECT_TRUE(log_scaled(Param::a));
  EXPECT_FALSE(log_scaled(Param::A));
}

TEST(Objective, ZeroOnOwnData) {
  const auto p = fabric_set();
  const auto data = synthesize(p, grid(1.0, 60.0), 0.0, 1, 1.0);
  EXPECT_LE(objective(p, data, 1.0), 1e-15);
}

TEST(Objective, PerturbationIncreases) {
  const auto p = fabric_set();
  const auto data = synthesize(p, grid(1.0, 60.0), 0.0, 1, 1.0);
  for (Param q : kAllParams) {
    auto pp = p;
    set(pp, q, get(p, q) * 1.05);
    EXPECT_GT(objective(pp, data, 1.0), objective(p, data, 1.0)) << param_name(q);
  }
}

TEST(Objective, ReorderInvariant) {
  const auto p = fabric_set();
  auto data = synthesize(p, grid(0.5, 50.0), 0.01, 9, 1.0);
  auto off = p;
  off.C = 1.3;
  const double f0 = objective(off, data, 1.0);
  std::mt19937_64 rng(2);
  std::shuffle(data.points.begin(), data.points.end(), rng);
  EXPECT_EQ(objective(off, data, 1.0), f0);
}

TEST(Objective, InadmissibleIsInfinite) {
  const auto data = synthesize(fabric_set(), grid(1.0, 30.0), 0.0, 1, 1.0);
  auto bad = fabric_set();
  bad.c = 0.5;
  EXPECT_TRUE(std::isinf(objective(bad, data, 1.0)));
}

TEST(Objective, ForceScaling) {
  const auto p = fabric_set();
  const auto f1 = model_forces(p, {10.0, 30.0}, 1.0, 1.0);
  const auto f2 = model_forces(p, {30.0, 10.0}, 2.0, 4.0);
  // F scales with L0, normalization divides by L0 mu0
  EXPECT_NEAR(f2[1], f1[0] / 4.0, 1e-15);
  EXPECT_NEAR(f2[0], f1[1] / 4.0, 1e-15);
}

TEST(NelderMead, BoundedRosenbrock) {
  auto rosen = [](const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const auto r = nelder_mead(rosen, {-1.0, 2.0}, {-2, -2}, {2, 2}, 5000, 4, 1e-10, 0.0);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 1.0, 1e-6);
  EXPECT_TRUE(r.converged);
  // optimum outside the box ends on the boundary
  auto shifted = [](const std::vector<double>& x) { return std::pow(x[0] - 5.0, 2); };
  const auto b = nelder_mead(shifted, {0.0}, {-1}, {1}, 2000, 4, 1e-12, 0.0);
  EXPECT_DOUBLE_EQ(b.x[0], 1.0);
}

TEST(Fit, DeterministicUnderSeed) {
  const auto truth = fabric_set();
  const auto data = synthesize(truth, grid(1.0, 60.0), 0.01, 5, 1.0);
  auto start = truth;
  start.A *= 1.1;
  start.C *= 0.9;
  FitConfig cfg;
  cfg.passes = 1;
  const auto a = fit(start, data, cfg);
  const auto b = fit(start, data, cfg);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.rms_error, b.rms_error);
  EXPECT_EQ(a.evals_used, b.evals_used);
  EXPECT_NO_THROW(a.params.validate());
}

TEST(Fit, FixedParametersUntouched) {
  const auto truth = fabric_set();
  const auto data = synthesize(truth, grid(1.0, 60.0), 0.01, 5, 1.0);
  auto start = truth;
  start.C = 1.4;
  start.c = 9.0;
  FitConfig cfg;
  cfg.free_params = {Param::C, Param::c};
  const auto r = fit(start, data, cfg);
  for (Param q : {Param::mu_f, Param::tau_y, Param::A, Param::a, Param::B, Param::b})
    EXPECT_EQ(get(r.params, q), get(start, q)) << param_name(q);
  EXPECT_NEAR(r.params.C, truth.C, 0.05 * truth.C);
  EXPECT_NEAR(r.params.c, truth.c, 0.05 * truth.c);
}

TEST(Fit, StartAtOptimumStays) {
  const auto truth = fabric_set();
  const auto data = synthesize(truth, grid(1.0, 60.0), 0.0, 1, 1.0);
  FitConfig cfg;
  cfg.passes = 1;
  const auto r = fit(truth, data, cfg);
  EXPECT_LE(r.rms_error, 1e-12);
}

TEST(Fit, StagesLimitAndReport) {
  const auto truth = fabric_set();
  const auto data = synthesize(truth, grid(0.5, 60.0), 0.01, 5, 1.0);
  FitConfig cfg;
  cfg.stages = 1;
  cfg.free_params = {Param::mu_f, Param::C};
  const auto r = fit(truth, data, cfg);
  ASSERT_EQ(r.stages.size(), 1u);
  EXPECT_EQ(r.stages[0].stage, 1);
  EXPECT_EQ(r.params.C, truth.C);
  const auto j = nlohmann::json::parse(report_json(r, data, cfg));
  EXPECT_EQ(j["stages"].size(), 1u);
  EXPECT_EQ(j["params"]["C"].get<double>(), truth.C);
  EXPECT_EQ(j["free_params"][0], "mu_f");
}

TEST(Fit, InitialOutsideBoundsRejected) {
  const auto data = synthesize(fabric_set(), grid(1.0, 30.0), 0.0, 1, 1.0);
  auto start = fabric_set();
  start.c = 50.0;
  EXPECT_THROW(fit(start, data, FitConfig{}), DomainError);
}

TEST(Synthesize, NoiseLevelAndDeterminism) {
  const auto g = grid(0.25, 60.0);
  const auto clean = synthesize(fabric_set(), g, 0.0, 1, 1.0);
  const auto a = synthesize(fabric_set(), g, 0.01, 3, 1.0);
  const auto b = synthesize(fabric_set(), g, 0.01, 3, 1.0);
  double s2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(a.points[i].force_norm, b.points[i].force_norm);
    const double e = a.points[i].force_norm / clean.points[i].force_norm - 1.0;
    s2 += e * e;
  }
  EXPECT_NEAR(std::sqrt(s2 / g.size()), 0.01, 0.002);
}
