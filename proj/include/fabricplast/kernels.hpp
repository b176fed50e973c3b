#pragma once

//! \file kernels.hpp
//! \brief Batched material kernels over structure-of-arrays data. The scalar
//! backend is the reference; the avx2 backend runs four lanes at a time via
//! std::experimental::simd and falls back to the scalar path for lanes whose
//! local Newton solve has not converged.
//!
//! The active backend is the best one the CPU supports, unless the
//! FABRICPLAST_KERNEL environment variable names another ("scalar", "avx2").

#include "fabricplast/interval.hpp"
#include "fabricplast/material_params.hpp"

#include <cstdint>
#include <span>
#include <string_view>

namespace fabricplast::kernels {

enum class Backend { scalar, avx2 };

const char* name(Backend b);
/// Throws DomainError for unknown names.
Backend parse_backend(std::string_view s);
/// Compiled in and supported by the running CPU.
bool available(Backend b);
Backend active();
/// Throws DomainError when b is not available.
void set_active(Backend b);

/// Structure-of-arrays view of n material points. All spans must have the
/// same length.
struct ReturnMapBatch {
  std::span<const double> phi_new;
  std::span<const double> phi_p_old;
  std::span<const double> q_old;
  std::span<const double> alpha_old;
  std::span<double> tau;
  std::span<double> phi_e;
  std::span<double> phi_p_new;
  std::span<double> q_new;
  std::span<double> alpha_new;
  std::span<double> dtau_dphi;
  std::span<double> delta_alpha;
  std::span<std::uint8_t> plastic;

  std::size_t size() const { return phi_new.size(); }
};

/// f and f' of the hardening function at every q.
void hardening(Backend b, std::span<const double> q, const material::ElastoplasticParams& p,
               std::span<double> f, std::span<double> fprime);

/// Same contract as material::return_map, lane by lane.
void return_map(Backend b, const ReturnMapBatch& batch, const material::ElastoplasticParams& p,
                const material::NewtonConfig& cfg = {});

/// analytic::interval_solve for many relative angles sharing one interval.
void interval_solve(Backend b, std::span<const double> phi_bar,
                    const analytic::IntervalState& is, const material::ElastoplasticParams& p,
                    const material::NewtonConfig& cfg, std::span<double> tau,
                    std::span<double> phi_p_bar, std::span<double> q);

namespace detail {

void hardening_scalar(std::span<const double>, const material::ElastoplasticParams&,
                      std::span<double>, std::span<double>);
void return_map_scalar(const ReturnMapBatch&, const material::ElastoplasticParams&,
                       const material::NewtonConfig&, std::size_t begin = 0);
void interval_solve_scalar(std::span<const double>, const analytic::IntervalState&,
                           const material::ElastoplasticParams&, const material::NewtonConfig&,
                           std::span<double>, std::span<double>, std::span<double>,
                           std::size_t begin = 0);

#ifdef FABRICPLAST_HAVE_AVX2
void hardening_avx2(std::span<const double>, const material::ElastoplasticParams&,
                    std::span<double>, std::span<double>);
void return_map_avx2(const ReturnMapBatch&, const material::ElastoplasticParams&,
                     const material::NewtonConfig&);
void interval_solve_avx2(std::span<const double>, const analytic::IntervalState&,
                         const material::ElastoplasticParams&, const material::NewtonConfig&,
                         std::span<double>, std::span<double>, std::span<double>);
#endif

}  // namespace detail

}  // namespace fabricplast::kernels
