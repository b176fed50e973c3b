#include "fabricplast/error.hpp"
#include "fabricplast/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace fabricplast;
using namespace fabricplast::kernels;
using material::ElastoplasticParams;

namespace {

ElastoplasticParams baseline_set() { return ElastoplasticParams::make(1, 0, 0.05, 1, 0.01, 55, 0.7, 5); }
ElastoplasticParams fabric_set() {
  return ElastoplasticParams::make(5, 1e-4, 8.8, 0.0024, 0.0028, 65, 1, 11);
}
ElastoplasticParams yielding_set() {
  return ElastoplasticParams::make(1, 0.5, 0.05, 1, 0.01, 55, 0.7, 5);
}

struct Soa {
  std::vector<double> phi, phi_p, q, alpha;
  std::vector<double> tau, phi_e, phi_p_new, q_new, alpha_new, dtau, dalpha;
  std::vector<std::uint8_t> plastic;

  explicit Soa(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      phi_p.push_back(0.2 * U(rng));
      q.push_back(0.4 * (1 + U(rng)));
      alpha.push_back(q.back() + 0.1);
      phi.push_back(phi_p.back() + 0.8 * U(rng));
    }
    for (auto* v : {&tau, &phi_e, &phi_p_new, &q_new, &alpha_new, &dtau, &dalpha})
      v->assign(n, 0.0);
    plastic.assign(n, 0);
  }
  ReturnMapBatch batch() {
    return {phi, phi_p, q, alpha, tau, phi_e, phi_p_new, q_new, alpha_new, dtau, dalpha, plastic};
  }
};

double rel(double x, double y) {
  return x == y ? 0.0 : std::abs(x - y) / std::max(std::abs(x), std::abs(y));
}

}  // namespace

TEST(Kernels, Names) {
  EXPECT_EQ(parse_backend("scalar"), Backend::scalar);
  EXPECT_EQ(parse_backend("avx2"), Backend::avx2);
  EXPECT_THROW(parse_backend("neon"), DomainError);
  EXPECT_STREQ(name(Backend::avx2), "avx2");
  EXPECT_TRUE(available(Backend::scalar));
  EXPECT_TRUE(available(active()));
}

TEST(Kernels, ScalarBatchMatchesPointwise) {
  for (const auto& p : {baseline_set(), fabric_set(), yielding_set()}) {
    Soa s(37, 1);
    return_map(Backend::scalar, s.batch(), p);
    for (std::size_t i = 0; i < s.phi.size(); ++i) {
      const auto r = material::return_map(s.phi[i], {s.phi_p[i], s.q[i], s.alpha[i]}, p);
      EXPECT_EQ(s.tau[i], r.tau);
      EXPECT_EQ(s.q_new[i], r.new_state.q);
      EXPECT_EQ(s.dtau[i], r.dtau_dphi);
      EXPECT_EQ(s.plastic[i] != 0, r.is_plastic);
    }
  }
}

TEST(Kernels, SizeMismatchRejected) {
  Soa s(8, 2);
  auto b = s.batch();
  b.tau = std::span<double>(s.tau.data(), 7);
  EXPECT_THROW(return_map(Backend::scalar, b, baseline_set()), DomainError);
}

class Avx2Equivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!available(Backend::avx2)) GTEST_SKIP() << "avx2 backend not available";
  }
};

TEST_F(Avx2Equivalence, Hardening) {
  for (const auto& p : {baseline_set(), fabric_set(), yielding_set()}) {
    std::vector<double> q;
    for (int i = 0; i <= 1501; ++i) q.push_back(i * 1e-3);
    std::vector<double> f1(q.size()), d1(q.size()), f2(q.size()), d2(q.size());
    hardening(Backend::scalar, q, p, f1, d1);
    hardening(Backend::avx2, q, p, f2, d2);
    for (std::size_t i = 0; i < q.size(); ++i) {
      EXPECT_LE(rel(f1[i], f2[i]), 1e-13) << q[i];
      EXPECT_LE(rel(d1[i], d2[i]), 1e-13) << q[i];
    }
  }
}

TEST_F(Avx2Equivalence, ReturnMap) {
  for (const auto& p : {baseline_set(), fabric_set(), yielding_set()})
    for (std::size_t n : {1u, 3u, 4u, 5u, 64u, 1001u}) {
      Soa a(n, 7 + n), b(n, 7 + n);
      return_map(Backend::scalar, a.batch(), p);
      return_map(Backend::avx2, b.batch(), p);
      for (std::size_t i = 0; i < n; ++i) {
        ASSERT_EQ(a.plastic[i], b.plastic[i]);
        EXPECT_LE(std::abs(a.tau[i] - b.tau[i]), 1e-13 * std::max(1.0, std::abs(a.tau[i])));
        EXPECT_LE(std::abs(a.q_new[i] - b.q_new[i]), 1e-13);
        EXPECT_LE(std::abs(a.phi_p_new[i] - b.phi_p_new[i]), 1e-13);
        EXPECT_LE(rel(a.dtau[i], b.dtau[i]), 1e-11);
        if (!a.plastic[i]) {
          EXPECT_EQ(b.q_new[i], b.q[i]);
          EXPECT_EQ(b.tau[i], a.tau[i]);
        }
      }
    }
}

TEST_F(Avx2Equivalence, IntervalSolve) {
  const analytic::IntervalState states[] = {{}, {0.3, 0.1, 0.2, 0.2}, {-0.2, -0.3, 0.4, 0.5}};
  std::vector<double> pb;
  for (int i = -250; i <= 250; ++i) pb.push_back(i * 3e-3);
  for (const auto& p : {baseline_set(), fabric_set(), yielding_set()})
    for (const auto& is : states) {
      std::vector<double> t1(pb.size()), p1(pb.size()), q1(pb.size());
      std::vector<double> t2(pb.size()), p2(pb.size()), q2(pb.size());
      interval_solve(Backend::scalar, pb, is, p, {}, t1, p1, q1);
      interval_solve(Backend::avx2, pb, is, p, {}, t2, p2, q2);
      for (std::size_t i = 0; i < pb.size(); ++i) {
        EXPECT_LE(std::abs(t1[i] - t2[i]), 1e-13 * std::max(1.0, std::abs(t1[i])));
        EXPECT_LE(std::abs(q1[i] - q2[i]), 1e-13);
        EXPECT_LE(std::abs(p1[i] - p2[i]), 1e-13);
      }
    }
}

TEST_F(Avx2Equivalence, ErrorsPropagate) {
  Soa s(9, 3);
  s.q[6] = -0.1;
  EXPECT_THROW(return_map(Backend::avx2, s.batch(), baseline_set()), DomainError);
  material::NewtonConfig tight;
  tight.max_iter = 1;
  tight.tol = 1e-300;
  Soa t(8, 4);
  EXPECT_THROW(return_map(Backend::avx2, t.batch(), fabric_set(), tight), ConvergenceError);
}

TEST(Kernels, ActiveBackendSwitch) {
  const Backend before = active();
  set_active(Backend::scalar);
  EXPECT_EQ(active(), Backend::scalar);
  if (!available(Backend::avx2)) {
    EXPECT_THROW(set_active(Backend::avx2), DomainError);
  }
  set_active(before);
}
