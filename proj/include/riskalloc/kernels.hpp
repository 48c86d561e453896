#pragma once

// Data-parallel inner loops shared by the estimators and the backtest.
//
// Every kernel has a scalar reference implementation plus, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The variant is
// chosen once at startup from the CPU feature bits and can be forced with the
// RISKALLOC_KERNELS environment variable (scalar|avx2|neon).
//
// Elementwise kernels (ewma_blend, rank1_ewma) are bit-identical across
// variants. Reductions (dot, sum, sum_sq_dev) use several partial accumulators
// in the vector variants and agree with the scalar loop to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace riskalloc::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*sum_sq_dev)(const double* a, std::size_t n, double mean);
  void (*ewma_blend)(double* state, const double* obs, std::size_t n, double beta);
  void (*rank1_ewma)(double* state, const double* z, std::size_t n, double beta);
};

/// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Table for a specific variant. Falls back to scalar when unavailable.
const KernelTable& table(Isa isa) noexcept;

Isa active_isa() noexcept;

/// Overrides the runtime selection; ignored if the variant is unavailable.
/// Returns the variant actually in effect.
Isa set_active_isa(Isa isa) noexcept;

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
/// Sum of (a_i - mean)^2.
double sum_sq_dev(std::span<const double> a, double mean);
/// state_i <- beta * state_i + (1 - beta) * obs_i
void ewma_blend(std::span<double> state, std::span<const double> obs, double beta);
/// state (n x n, row-major) <- beta * state + (1 - beta) * z z^T
void rank1_ewma(std::span<double> state, std::span<const double> z, double beta);

namespace detail {
extern const KernelTable scalar_table;
#if defined(RISKALLOC_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(RISKALLOC_HAVE_NEON)
extern const KernelTable neon_table;
#endif
}  // namespace detail

}  // namespace riskalloc::kernels
