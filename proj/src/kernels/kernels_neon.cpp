#include <arm_neon.h>

#include "riskalloc/kernels.hpp"

namespace riskalloc::kernels::detail {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_neon(const double* a, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(a + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(a + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i];
  return acc;
}

double sum_sq_dev_neon(const double* a, std::size_t n, double mean) {
  const float64x2_t m = vdupq_n_f64(mean);
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), m);
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), m);
    acc0 = vaddq_f64(acc0, vmulq_f64(d0, d0));
    acc1 = vaddq_f64(acc1, vmulq_f64(d1, d1));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - mean;
    acc += d * d;
  }
  return acc;
}

void ewma_blend_neon(double* state, const double* obs, std::size_t n, double beta) {
  const double gain = 1.0 - beta;
  const float64x2_t vb = vdupq_n_f64(beta);
  const float64x2_t vg = vdupq_n_f64(gain);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t s = vmulq_f64(vb, vld1q_f64(state + i));
    const float64x2_t o = vmulq_f64(vg, vld1q_f64(obs + i));
    vst1q_f64(state + i, vaddq_f64(s, o));
  }
  for (; i < n; ++i) state[i] = beta * state[i] + gain * obs[i];
}

void rank1_ewma_neon(double* state, const double* z, std::size_t n, double beta) {
  const double gain = 1.0 - beta;
  const float64x2_t vb = vdupq_n_f64(beta);
  const float64x2_t vg = vdupq_n_f64(gain);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = state + i * n;
    const float64x2_t zi = vdupq_n_f64(z[i]);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      const float64x2_t prod = vmulq_f64(zi, vld1q_f64(z + j));
      const float64x2_t s = vmulq_f64(vb, vld1q_f64(row + j));
      vst1q_f64(row + j, vaddq_f64(s, vmulq_f64(vg, prod)));
    }
    for (; j < n; ++j) row[j] = beta * row[j] + gain * (z[i] * z[j]);
  }
}

}  // namespace

const KernelTable neon_table{
    dot_neon, sum_neon, sum_sq_dev_neon, ewma_blend_neon, rank1_ewma_neon,
};

}  // namespace riskalloc::kernels::detail
