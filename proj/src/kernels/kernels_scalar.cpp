#include "riskalloc/kernels.hpp"

namespace riskalloc::kernels::detail {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double sum_sq_dev_scalar(const double* a, std::size_t n, double mean) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - mean;
    acc += d * d;
  }
  return acc;
}

void ewma_blend_scalar(double* state, const double* obs, std::size_t n, double beta) {
  const double gain = 1.0 - beta;
  for (std::size_t i = 0; i < n; ++i) state[i] = beta * state[i] + gain * obs[i];
}

void rank1_ewma_scalar(double* state, const double* z, std::size_t n, double beta) {
  const double gain = 1.0 - beta;
  for (std::size_t i = 0; i < n; ++i) {
    double* row = state + i * n;
    for (std::size_t j = 0; j < n; ++j) row[j] = beta * row[j] + gain * (z[i] * z[j]);
  }
}

}  // namespace

const KernelTable scalar_table{
    dot_scalar, sum_scalar, sum_sq_dev_scalar, ewma_blend_scalar, rank1_ewma_scalar,
};

}  // namespace riskalloc::kernels::detail
