#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string_view>

#include "riskalloc/kernels.hpp"

namespace riskalloc::kernels {

namespace {

Isa detect_best() noexcept {
#if defined(RISKALLOC_HAVE_AVX2)
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
#endif
#if defined(RISKALLOC_HAVE_NEON)
  if (isa_available(Isa::Neon)) return Isa::Neon;
#endif
  return Isa::Scalar;
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("RISKALLOC_KERNELS")) {
    const std::string_view v{env};
    Isa wanted = Isa::Scalar;
    if (v == "avx2") wanted = Isa::Avx2;
    else if (v == "neon") wanted = Isa::Neon;
    else if (v != "scalar") return detect_best();
    return isa_available(wanted) ? wanted : Isa::Scalar;
  }
  return detect_best();
}

std::atomic<Isa>& active_slot() noexcept {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "scalar";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(RISKALLOC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(RISKALLOC_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) noexcept {
  if (!isa_available(isa)) return detail::scalar_table;
  switch (isa) {
#if defined(RISKALLOC_HAVE_AVX2)
    case Isa::Avx2: return detail::avx2_table;
#endif
#if defined(RISKALLOC_HAVE_NEON)
    case Isa::Neon: return detail::neon_table;
#endif
    default: return detail::scalar_table;
  }
}

Isa active_isa() noexcept { return active_slot().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) noexcept {
  const Isa effective = isa_available(isa) ? isa : Isa::Scalar;
  active_slot().store(effective, std::memory_order_relaxed);
  return effective;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return table(active_isa()).dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> a) { return table(active_isa()).sum(a.data(), a.size()); }

double sum_sq_dev(std::span<const double> a, double mean) {
  return table(active_isa()).sum_sq_dev(a.data(), a.size(), mean);
}

void ewma_blend(std::span<double> state, std::span<const double> obs, double beta) {
  assert(state.size() == obs.size());
  table(active_isa()).ewma_blend(state.data(), obs.data(), state.size(), beta);
}

void rank1_ewma(std::span<double> state, std::span<const double> z, double beta) {
  assert(state.size() == z.size() * z.size());
  table(active_isa()).rank1_ewma(state.data(), z.data(), z.size(), beta);
}

}  // namespace riskalloc::kernels
