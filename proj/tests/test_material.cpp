#include "fabricplast/error.hpp"
#include "fabricplast/material.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace fabricplast;
using namespace fabricplast::material;

namespace {

ElastoplasticParams baseline_set() { return ElastoplasticParams::make(1, 0, 0.05, 1, 0.01, 55, 0.7, 5); }
ElastoplasticParams fabric_set() {
  return ElastoplasticParams::make(5, 1e-4, 8.8, 0.0024, 0.0028, 65, 1, 11);
}
ElastoplasticParams yielding_set() {
  return ElastoplasticParams::make(1, 0.1, 0.05, 1, 0.01, 55, 0.7, 5);
}

double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

}  // namespace

// Reference values: tests/oracles/derive.py
TEST(Hardening, FabricSetValues) {
  const auto p = fabric_set();
  EXPECT_NEAR(f_iso(0.0, p), 1e-4, 1e-19);
  EXPECT_LE(rel(f_iso(0.1, p), 0.0050119873319087322655), 1e-14);
  EXPECT_LE(rel(f_iso(0.5, p), 0.01394827871560164229), 1e-14);
  EXPECT_LE(rel(f_iso(1.0, p), 1.0240199797248525531), 1e-14);
  EXPECT_LE(rel(f_iso_prime(0.0, p), 0.20312), 1e-14);
  EXPECT_LE(rel(f_iso_prime(0.1, p), 0.021121646004113500081), 1e-13);
  EXPECT_LE(rel(f_iso_prime(0.5, p), 0.031862172293616422892), 1e-13);
  EXPECT_LE(rel(f_iso_prime(1.0, p), 11.021119939174662765), 1e-14);
}

TEST(Hardening, DerivativeMatchesFiniteDifferences) {
  for (const auto& p : {baseline_set(), fabric_set(), yielding_set()})
    for (double q = 0.01; q < 1.5; q += 0.07) {
      const double h = 1e-6;
      const double fd = (f_iso(q + h, p) - f_iso(q - h, p)) / (2 * h);
      EXPECT_LE(rel(fd, f_iso_prime(q, p)), 1e-7) << q;
    }
}

TEST(Hardening, NegativeQRejected) {
  EXPECT_THROW(f_iso(-1e-3, baseline_set()), DomainError);
  EXPECT_THROW(f_iso_prime(std::numeric_limits<double>::quiet_NaN(), baseline_set()), DomainError);
}

TEST(Params, Validation) {
  EXPECT_NO_THROW(fabric_set().validate());
  EXPECT_THROW(ElastoplasticParams::make(0, 0, 0, 1, 0, 1, 0, 1), InvalidParameterError);
  EXPECT_THROW(ElastoplasticParams::make(1, -1, 0, 1, 0, 1, 0, 1), InvalidParameterError);
  EXPECT_THROW(ElastoplasticParams::make(1, 0, 0, 1, 0, 1, 0, 0.5), InvalidParameterError);
  EXPECT_THROW(ElastoplasticParams::make(1, 0, 0, 1, 0, 1, -1, 2), InvalidParameterError);
  EXPECT_THROW(ElastoplasticParams::make(1, 0, 0, 1, 0, 1, 0, NAN), InvalidParameterError);
  // softening hardening curve
  EXPECT_THROW(ElastoplasticParams::make(1, 0, -1, 1, 0, 1, 0, 1), InvalidParameterError);
}

TEST(Params, AdmissibleHardeningOnGrid) {
  for (const auto& p : {fabric_set(), yielding_set()})
    for (int i = 0; i <= 1500; ++i) EXPECT_GT(f_iso_prime(i * 1e-3, p), 0.0);
}

TEST(ReturnMap, BaselineVirginStep) {
  const auto r = return_map(0.3, PlasticState{}, baseline_set());
  ASSERT_TRUE(r.is_plastic);
  EXPECT_LE(rel(r.tau, 0.024703513337976900503), 1e-12);
  EXPECT_LE(rel(r.new_state.q, 0.2752964866620230995), 1e-13);
  EXPECT_LE(rel(r.dtau_dphi, 0.063942175092469308675), 1e-12);
  EXPECT_EQ(r.new_state.phi_p, r.new_state.q);
  EXPECT_EQ(r.new_state.alpha_p, r.delta_alpha);
  EXPECT_NEAR(r.phi_e + r.new_state.phi_p, 0.3, 1e-16);
}

TEST(ReturnMap, FabricVirginStep) {
  const double phi = std::sin(20.0 * std::numbers::pi / 180.0);
  const auto r = return_map(phi, PlasticState{}, fabric_set());
  ASSERT_TRUE(r.is_plastic);
  EXPECT_LE(rel(r.tau, 0.010087872922598352119), 1e-11);
  EXPECT_LE(rel(r.new_state.q, 0.34000256874114906262), 1e-13);
  EXPECT_LE(rel(r.dtau_dphi, 0.021256339472779936825), 1e-11);
}

TEST(ReturnMap, ElasticStepIsBitIdentical) {
  const auto p = yielding_set();
  const PlasticState s{0.013, 0.21, 0.37};
  for (double phi : {0.013, 0.05, 0.013 - 0.05, 0.013 + 0.9 * f_iso(0.21, p)}) {
    const auto r = return_map(phi, s, p);
    EXPECT_FALSE(r.is_plastic);
    EXPECT_EQ(r.new_state, s);
    EXPECT_EQ(r.tau, p.mu_f * (phi - s.phi_p));
    EXPECT_EQ(r.dtau_dphi, p.mu_f);
    EXPECT_EQ(r.delta_alpha, 0.0);
  }
}

TEST(ReturnMap, PlasticConsistency) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (const auto& p : {baseline_set(), fabric_set(), yielding_set()})
    for (int t = 0; t < 200; ++t) {
      const PlasticState s{0.3 * U(rng), 0.5 * (1 + U(rng)), 1.0 + U(rng)};
      const auto r = return_map(s.phi_p + U(rng), s, p);
      if (!r.is_plastic) continue;
      EXPECT_LE(std::abs(yield_function(r.tau, r.new_state.q, p)), 1e-12 * p.mu_f);
      EXPECT_GE(r.delta_alpha, 0.0);
      EXPECT_GE(r.tau * (r.new_state.phi_p - s.phi_p), 0.0);
      EXPECT_NEAR(r.new_state.q - s.q, r.delta_alpha, 1e-15);
      EXPECT_NEAR(r.new_state.alpha_p - s.alpha_p, r.delta_alpha, 1e-15);
    }
}

TEST(ReturnMap, TangentMatchesFiniteDifferences) {
  const double h = 1e-6;
  for (const auto& p : {baseline_set(), fabric_set(), yielding_set()})
    for (double phi : {-0.6, -0.2, 0.02, 0.15, 0.4, 0.8}) {
      const PlasticState s{0.05, 0.1, 0.2};
      const auto r = return_map(phi, s, p);
      const auto rp = return_map(phi + h, s, p), rm = return_map(phi - h, s, p);
      if (rp.is_plastic != rm.is_plastic) continue;
      EXPECT_LE(rel((rp.tau - rm.tau) / (2 * h), r.dtau_dphi), 1e-5) << phi;
    }
}

TEST(ReturnMap, SignSymmetry) {
  const auto p = baseline_set();
  const PlasticState s{0.12, 0.3, 0.5};
  const PlasticState mirrored{-0.12, 0.3, 0.5};
  for (double phi : {0.05, 0.3, 0.7}) {
    const auto a = return_map(phi, s, p), b = return_map(-phi, mirrored, p);
    EXPECT_EQ(a.is_plastic, b.is_plastic);
    EXPECT_DOUBLE_EQ(a.tau, -b.tau);
    EXPECT_DOUBLE_EQ(a.new_state.q, b.new_state.q);
    EXPECT_DOUBLE_EQ(a.new_state.phi_p, -b.new_state.phi_p);
  }
}

TEST(ReturnMap, HysteresisLeavesPermanentSet) {
  const auto p = yielding_set();
  const auto load = return_map(0.5, PlasticState{}, p);
  ASSERT_TRUE(load.is_plastic);
  // unload to zero stress
  const auto unload = return_map(load.new_state.phi_p, load.new_state, p);
  EXPECT_FALSE(unload.is_plastic);
  EXPECT_EQ(unload.tau, 0.0);
  EXPECT_GT(unload.new_state.phi_p, 0.1);
}

TEST(ReturnMap, ResidualDefinition) {
  const auto p = baseline_set();
  EXPECT_DOUBLE_EQ(return_residual(0.4, 0.1, 0.05, p), 0.4 - 0.05 - f_iso(0.15, p));
  EXPECT_DOUBLE_EQ(yield_function(-0.2, 0.1, p), 0.2 - f_iso(0.1, p));
}

TEST(ReturnMap, BadConfigRejected) {
  NewtonConfig bad;
  bad.max_iter = 0;
  EXPECT_THROW(return_map(0.3, PlasticState{}, baseline_set(), bad), DomainError);
}

TEST(ReturnMap, IterationBudgetExhausted) {
  NewtonConfig tight;
  tight.max_iter = 1;
  tight.tol = 1e-300;
  EXPECT_THROW(return_map(0.9, PlasticState{}, fabric_set(), tight), ConvergenceError);
}

namespace {

struct Geometry {
  kinematics::MetricPoint m;
  kinematics::RefFiberPair f;
};

Geometry sheared(const Mat2& a) {
  Geometry g{kinematics::MetricPoint::make(Mat2::Identity(), a), {}};
  g.f = kinematics::RefFiberPair::make(Mat2::Identity(), Vec2(1, 1), Vec2(-1, 1));
  return g;
}

// Stress and tangent at metric a with frozen plastic state s.
AngleStress response(const Mat2& a, const PlasticState& s, const ElastoplasticParams& ep,
                     const HyperelasticParams& hp) {
  const auto g = sheared(a);
  const auto fs = kinematics::fiber_state(g.m, g.f);
  const auto st = kinematics::structural_tensors(g.m, fs);
  const auto sr = return_map(fs.theta12 - g.f.Theta12, s, ep);
  return membrane_stress(g.m, g.f, sr, st, hp);
}

const Mat2 kDirections[3] = {(Mat2() << 1, 0, 0, 0).finished(), (Mat2() << 0, 0, 0, 1).finished(),
                             (Mat2() << 0, 1, 1, 0).finished()};

}  // namespace

TEST(Stress, EnergyConsistencyAtFrozenState) {
  const auto ep = yielding_set();
  HyperelasticParams hp;
  hp.eps_L = 40.0;
  Mat2 a;
  a << 1.1, 0.3, 0.3, 0.95;
  const double phi_p = 0.07;
  auto W = [&](const Mat2& am) {
    const auto g = sheared(am);
    const double phi = kinematics::angle_measures(g.m, g.f).phi;
    return strain_energy(g.m, g.f, kinematics::CurvaturePoint{}, phi - phi_p, hp, ep);
  };
  // huge q keeps the step elastic
  const auto s = response(a, PlasticState{phi_p, 50.0, 0.0}, ep, hp);
  const double h = 1e-6;
  for (const auto& E : kDirections) {
    const double dW = (W(a + h * E) - W(a - h * E)) / (2 * h);
    EXPECT_NEAR(2 * dW, ddot(s.tau_ab, E), 1e-8);
  }
}

TEST(Stress, TangentIsTwiceStressDerivative) {
  const auto ep = baseline_set();
  HyperelasticParams hp;
  hp.eps_L = 25.0;
  Mat2 a;
  a << 1.05, 0.4, 0.4, 0.98;
  for (const PlasticState s : {PlasticState{}, PlasticState{0.1, 0.2, 0.3}, PlasticState{0, 50, 0}}) {
    const auto c = response(a, s, ep, hp);
    const double h = 1e-6;
    for (const auto& E : kDirections) {
      const Mat2 fd =
          (response(a + h * E, s, ep, hp).tau_ab - response(a - h * E, s, ep, hp).tau_ab) /
          (2 * h);
      const Mat2 an = 0.5 * contract(c.c_ab, E);
      EXPECT_LE((fd - an).cwiseAbs().maxCoeff(), 1e-6 * (1.0 + an.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(Stress, NoStretchNoMembraneTerm) {
  const auto g = sheared(Mat2::Identity());
  const auto fs = kinematics::fiber_state(g.m, g.f);
  const auto st = kinematics::structural_tensors(g.m, fs);
  const auto sr = return_map(0.0, PlasticState{}, yielding_set());
  HyperelasticParams hp;
  hp.eps_L = 1e3;
  const auto s = membrane_stress(g.m, g.f, sr, st, hp);
  EXPECT_LE(s.tau_ab.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Bending, MomentsFromCurvatureChange) {
  const auto m = kinematics::MetricPoint::make(Mat2::Identity(), Mat2::Identity());
  const auto f = kinematics::RefFiberPair::make(Mat2::Identity(), Vec2(1, 0), Vec2(0, 1));
  kinematics::CurvaturePoint c;
  c.b_ab << 0.2, 0, 0, -0.1;
  HyperelasticParams hp;
  hp.beta_n = 3.0;
  const auto r = moments_and_bending_tangents(m, f, c, hp);
  EXPECT_NEAR(r.M0(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(r.M0(1, 1), -0.3, 1e-15);
  EXPECT_NEAR(r.f_tan(0, 0, 0, 0), 3.0, 1e-15);
  EXPECT_NEAR(strain_energy(m, f, c, 0.0, hp, baseline_set()), 0.5 * 3.0 * (0.04 + 0.01), 1e-15);
}
