#include "fabricplast/kernels.hpp"

namespace fabricplast::kernels::detail {

void hardening_scalar(std::span<const double> q, const material::ElastoplasticParams& p,
                      std::span<double> f, std::span<double> fprime) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    f[i] = material::f_iso(q[i], p);
    fprime[i] = material::f_iso_prime(q[i], p);
  }
}

void return_map_scalar(const ReturnMapBatch& b, const material::ElastoplasticParams& p,
                       const material::NewtonConfig& cfg, std::size_t begin) {
  for (std::size_t i = begin; i < b.size(); ++i) {
    const material::PlasticState old{b.phi_p_old[i], b.q_old[i], b.alpha_old[i]};
    const auto r = material::return_map(b.phi_new[i], old, p, cfg);
    b.tau[i] = r.tau;
    b.phi_e[i] = r.phi_e;
    b.phi_p_new[i] = r.new_state.phi_p;
    b.q_new[i] = r.new_state.q;
    b.alpha_new[i] = r.new_state.alpha_p;
    b.dtau_dphi[i] = r.dtau_dphi;
    b.delta_alpha[i] = r.delta_alpha;
    b.plastic[i] = r.is_plastic ? 1 : 0;
  }
}

void interval_solve_scalar(std::span<const double> phi_bar, const analytic::IntervalState& is,
                           const material::ElastoplasticParams& p,
                           const material::NewtonConfig& cfg, std::span<double> tau,
                           std::span<double> phi_p_bar, std::span<double> q,
                           std::size_t begin) {
  for (std::size_t i = begin; i < phi_bar.size(); ++i) {
    const auto s = analytic::interval_solve(phi_bar[i], is, p, cfg);
    tau[i] = s.tau;
    phi_p_bar[i] = s.phi_p_bar;
    q[i] = s.q;
  }
}

}  // namespace fabricplast::kernels::detail
