// Compiled with -mavx2 only. FMA is deliberately not enabled so the
// elementwise kernels round exactly like the scalar reference.

#include <immintrin.h>

#include "riskalloc/kernels.hpp"

namespace riskalloc::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i];
  return acc;
}

double sum_sq_dev_avx2(const double* a, std::size_t n, double mean) {
  const __m256d m = _mm256_set1_pd(mean);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), m);
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), m);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), m);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - mean;
    acc += d * d;
  }
  return acc;
}

void ewma_blend_avx2(double* state, const double* obs, std::size_t n, double beta) {
  const double gain = 1.0 - beta;
  const __m256d vb = _mm256_set1_pd(beta);
  const __m256d vg = _mm256_set1_pd(gain);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_mul_pd(vb, _mm256_loadu_pd(state + i));
    const __m256d o = _mm256_mul_pd(vg, _mm256_loadu_pd(obs + i));
    _mm256_storeu_pd(state + i, _mm256_add_pd(s, o));
  }
  for (; i < n; ++i) state[i] = beta * state[i] + gain * obs[i];
}

void rank1_ewma_avx2(double* state, const double* z, std::size_t n, double beta) {
  const double gain = 1.0 - beta;
  const __m256d vb = _mm256_set1_pd(beta);
  const __m256d vg = _mm256_set1_pd(gain);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = state + i * n;
    const __m256d zi = _mm256_set1_pd(z[i]);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256d prod = _mm256_mul_pd(zi, _mm256_loadu_pd(z + j));
      const __m256d s = _mm256_mul_pd(vb, _mm256_loadu_pd(row + j));
      _mm256_storeu_pd(row + j, _mm256_add_pd(s, _mm256_mul_pd(vg, prod)));
    }
    for (; j < n; ++j) row[j] = beta * row[j] + gain * (z[i] * z[j]);
  }
}

}  // namespace

const KernelTable avx2_table{
    dot_avx2, sum_avx2, sum_sq_dev_avx2, ewma_blend_avx2, rank1_ewma_avx2,
};

}  // namespace riskalloc::kernels::detail
