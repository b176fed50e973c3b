#include "fabricplast/error.hpp"
#include "fabricplast/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace fabricplast::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(FABRICPLAST_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("FABRICPLAST_KERNEL")) {
    const Backend b = parse_backend(env);
    if (!available(b))
      throw DomainError(std::string("kernel backend '") + env + "' is not available");
    return b;
  }
  return available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& active_slot() {
  static std::atomic<Backend> slot{initial_backend()};
  return slot;
}

void check_sizes(std::size_t n, std::initializer_list<std::size_t> others) {
  for (std::size_t m : others)
    if (m != n) throw DomainError("kernel batch spans differ in length");
}

}  // namespace

const char* name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

Backend parse_backend(std::string_view s) {
  if (s == "scalar") return Backend::scalar;
  if (s == "avx2") return Backend::avx2;
  throw DomainError("unknown kernel backend '" + std::string(s) + "'");
}

bool available(Backend b) { return b == Backend::scalar || cpu_has_avx2(); }

Backend active() { return active_slot().load(); }

void set_active(Backend b) {
  if (!available(b)) throw DomainError(std::string("kernel backend '") + name(b) + "' is not available");
  active_slot().store(b);
}

void hardening(Backend b, std::span<const double> q, const material::ElastoplasticParams& p,
               std::span<double> f, std::span<double> fprime) {
  check_sizes(q.size(), {f.size(), fprime.size()});
#ifdef FABRICPLAST_HAVE_AVX2
  if (b == Backend::avx2 && available(b)) return detail::hardening_avx2(q, p, f, fprime);
#endif
  detail::hardening_scalar(q, p, f, fprime);
}

void return_map(Backend b, const ReturnMapBatch& batch, const material::ElastoplasticParams& p,
                const material::NewtonConfig& cfg) {
  check_sizes(batch.size(),
              {batch.phi_p_old.size(), batch.q_old.size(), batch.alpha_old.size(),
               batch.tau.size(), batch.phi_e.size(), batch.phi_p_new.size(), batch.q_new.size(),
               batch.alpha_new.size(), batch.dtau_dphi.size(), batch.delta_alpha.size(),
               batch.plastic.size()});
#ifdef FABRICPLAST_HAVE_AVX2
  if (b == Backend::avx2 && available(b)) return detail::return_map_avx2(batch, p, cfg);
#endif
  detail::return_map_scalar(batch, p, cfg);
}

void interval_solve(Backend b, std::span<const double> phi_bar,
                    const analytic::IntervalState& is, const material::ElastoplasticParams& p,
                    const material::NewtonConfig& cfg, std::span<double> tau,
                    std::span<double> phi_p_bar, std::span<double> q) {
  check_sizes(phi_bar.size(), {tau.size(), phi_p_bar.size(), q.size()});
#ifdef FABRICPLAST_HAVE_AVX2
  if (b == Backend::avx2 && available(b))
    return detail::interval_solve_avx2(phi_bar, is, p, cfg, tau, phi_p_bar, q);
#endif
  detail::interval_solve_scalar(phi_bar, is, p, cfg, tau, phi_p_bar, q);
}

}  // namespace fabricplast::kernels
