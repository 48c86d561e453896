#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>

#include "riskalloc/error.hpp"
#include "riskalloc/kernels.hpp"
#include "riskalloc/riskmodels.hpp"

namespace riskalloc {

namespace {

constexpr double kMaxPersistence = 1.0 - 1e-6;
constexpr std::size_t kMinWindow = 50;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// Unconstrained coordinates: log omega, logit of persistence share of the
// admissible range, logit of the ARCH share of persistence, mean.
GarchParams from_unconstrained(const double* theta) {
  const double persistence = kMaxPersistence * logistic(theta[1]);
  const double arch_share = logistic(theta[2]);
  return GarchParams{std::exp(theta[0]), persistence * arch_share, persistence * (1.0 - arch_share), theta[3]};
}

struct Objective {
  std::span<const double> returns;
  double initial_var;
};

double negative_log_likelihood(const gsl_vector* x, void* raw) {
  const auto* obj = static_cast<const Objective*>(raw);
  const GarchParams p = from_unconstrained(x->data);
  const double ll = garch_log_likelihood(obj->returns, p, obj->initial_var);
  return std::isfinite(ll) ? -ll : std::numeric_limits<double>::max();
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

void silence_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

}  // namespace

double garch_log_likelihood(std::span<const double> returns, const GarchParams& params,
                            double initial_var, double* last_eps_sq, double* last_var) {
  constexpr double log_two_pi = 1.8378770664093453;  // log(2 pi)
  double var = initial_var;
  double ll = 0.0;
  double eps_sq = 0.0;
  for (std::size_t t = 0; t < returns.size(); ++t) {
    if (t > 0) var = params.omega + params.a1 * eps_sq + params.b1 * var;
    const double eps = returns[t] - params.mu;
    eps_sq = eps * eps;
    if (!(var > 0.0)) return -std::numeric_limits<double>::infinity();
    ll -= 0.5 * (log_two_pi + std::log(var) + eps_sq / var);
  }
  if (last_eps_sq) *last_eps_sq = eps_sq;
  if (last_var) *last_var = var;
  return ll;
}

GarchFit fit_garch11(std::span<const double> window, const GarchFitOptions& options) {
  if (window.size() < kMinWindow) fail(ErrorKind::Input, "GARCH window needs at least 50 returns");
  for (double r : window)
    if (!std::isfinite(r)) fail(ErrorKind::Input, "non-finite return in GARCH window");

  const double n = static_cast<double>(window.size());
  const double mean = kernels::sum(window) / n;
  double sample_var = kernels::sum_sq_dev(window, mean) / n;
  // A constant window leaves only rounding noise in the mean; treat it as zero.
  const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
  if (*lo == *hi) sample_var = 0.0;

  GarchFit constant;
  constant.params = GarchParams{sample_var, 0.0, 0.0, mean};
  constant.fallback = true;
  if (!(sample_var > 0.0)) {
    constant.params.omega = 0.0;
    constant.log_likelihood = std::numeric_limits<double>::quiet_NaN();
    constant.last_eps_sq = 0.0;
    constant.last_var = 0.0;
    return constant;
  }
  constant.log_likelihood = garch_log_likelihood(window, constant.params, sample_var,
                                                 &constant.last_eps_sq, &constant.last_var);

  // Optimize on returns scaled to unit variance; likelihoods differ from the
  // original units by a constant, so the argmax maps back exactly.
  const double scale = std::sqrt(sample_var);
  std::vector<double> scaled(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) scaled[i] = window[i] / scale;
  Objective objective{scaled, 1.0};

  const GarchParams start_scaled{0.05, 0.05, 0.90, mean / scale};
  double start[4] = {std::log(start_scaled.omega),
                     logit(start_scaled.persistence() / kMaxPersistence),
                     logit(start_scaled.a1 / start_scaled.persistence()), start_scaled.mu};

  silence_gsl();
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> minimizer(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 4));
  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(4));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(4));
  for (int i = 0; i < 4; ++i) gsl_vector_set(x.get(), i, start[i]);
  gsl_vector_set(step.get(), 0, 0.5);
  gsl_vector_set(step.get(), 1, 0.5);
  gsl_vector_set(step.get(), 2, 0.5);
  gsl_vector_set(step.get(), 3, 0.05);

  gsl_multimin_function fn{&negative_log_likelihood, 4, &objective};
  int iterations = 0;
  bool ok = gsl_multimin_fminimizer_set(minimizer.get(), &fn, x.get(), step.get()) == GSL_SUCCESS;
  for (int iter = 0; ok && iter < options.max_iterations; ++iter) {
    if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
    ++iterations;
    const double size = gsl_multimin_fminimizer_size(minimizer.get());
    if (gsl_multimin_test_size(size, options.simplex_tolerance) == GSL_SUCCESS) break;
  }

  GarchFit fit;
  fit.iterations = iterations;
  if (ok) {
    const GarchParams s = from_unconstrained(gsl_multimin_fminimizer_x(minimizer.get())->data);
    fit.params = GarchParams{s.omega * sample_var, s.a1, s.b1, s.mu * scale};
    fit.log_likelihood = garch_log_likelihood(window, fit.params, sample_var, &fit.last_eps_sq, &fit.last_var);
  }
  if (!ok || !std::isfinite(fit.log_likelihood) || fit.log_likelihood < constant.log_likelihood) {
    constant.iterations = iterations;
    return constant;
  }
  return fit;
}

double garch_forecast(const GarchParams& params, double last_eps_sq, double last_var) {
  if (!(params.omega >= 0.0) || !(params.a1 >= 0.0) || !(params.b1 >= 0.0) || !(params.a1 + params.b1 < 1.0))
    fail(ErrorKind::Input, "invalid GARCH parameters");
  if (!(last_eps_sq >= 0.0) || !(last_var >= 0.0)) fail(ErrorKind::Input, "GARCH state must be nonnegative");
  return params.omega + params.a1 * last_eps_sq + params.b1 * last_var;
}

}  // namespace riskalloc
