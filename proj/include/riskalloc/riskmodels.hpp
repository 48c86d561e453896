#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "riskalloc/date.hpp"
#include "riskalloc/marketdata.hpp"

namespace riskalloc {

/// Accumulated normalization mass after which an EWMA counts as mature:
/// three half-lives of data.
inline constexpr double kEwmaMatureWeight = 1.0 - 0.125;

/// Decay factor 2^(-1/half_life).
double decay_from_half_life(double half_life);

/// Exponentially weighted mean of squared observations, normalized by the
/// accumulated weight so early estimates are not biased toward zero.
class EwmaEstimator {
 public:
  explicit EwmaEstimator(double half_life);

  [[nodiscard]] EwmaEstimator update(double observation) const;

  double half_life() const noexcept { return half_life_; }
  double beta() const noexcept { return beta_; }
  double weight_sum() const noexcept { return weight_sum_; }
  std::size_t count() const noexcept { return count_; }
  bool mature() const noexcept { return weight_sum_ > kEwmaMatureWeight; }

  /// Normalized weighted second moment; NaN before the first observation.
  double estimate() const noexcept;
  double volatility() const noexcept;

 private:
  double half_life_;
  double beta_;
  double state_ = 0.0;
  double weight_sum_ = 0.0;
  std::size_t count_ = 0;
};

/// Iterated-EWMA covariance estimates, one per trading date of the source
/// panel. Sigma_t = V_t R_t V_t with V_t the per-asset EWMA volatilities and
/// R_t the normalized EWMA of standardized-return outer products.
class CovarianceSeries {
 public:
  CovarianceSeries(std::vector<Date> dates, std::vector<std::string> asset_ids,
                   std::vector<Eigen::VectorXd> vols, std::vector<Eigen::MatrixXd> corrs,
                   std::vector<bool> mature);

  std::size_t size() const noexcept { return dates_.size(); }
  std::size_t n_assets() const noexcept { return asset_ids_.size(); }
  const std::vector<Date>& dates() const noexcept { return dates_; }
  const std::vector<std::string>& asset_ids() const noexcept { return asset_ids_; }

  const Eigen::VectorXd& vols(std::size_t t) const { return vols_.at(t); }
  const Eigen::MatrixXd& corr(std::size_t t) const { return corrs_.at(t); }
  const Eigen::MatrixXd& sigma(std::size_t t) const { return sigmas_.at(t); }
  bool mature(std::size_t t) const { return mature_.at(t); }

  /// Index of the first mature date, or size() if none.
  std::size_t first_mature() const noexcept;

  /// Restriction to a subset of assets (by position). Every IEWMA entry
  /// depends only on its asset pair, so this equals re-estimation on the
  /// restricted panel.
  CovarianceSeries select(const std::vector<std::size_t>& assets) const;

 private:
  std::vector<Date> dates_;
  std::vector<std::string> asset_ids_;
  std::vector<Eigen::VectorXd> vols_;
  std::vector<Eigen::MatrixXd> corrs_;
  std::vector<Eigen::MatrixXd> sigmas_;
  std::vector<bool> mature_;
};

struct IewmaOptions {
  double vol_half_life = 63.0;
  double corr_half_life = 125.0;

  bool operator==(const IewmaOptions&) const = default;
};

/// Estimates at date t use returns up to and including t.
CovarianceSeries iewma_covariance(const ReturnPanel& panel, const IewmaOptions& options = {});

/// Writes index.csv (date, maturity, per-asset volatility, file names) plus
/// one covariance and one correlation CSV per date.
void write_covariance_series(const std::filesystem::path& dir, const CovarianceSeries& series);

struct GarchParams {
  double omega = 0.0;  // variance units
  double a1 = 0.0;
  double b1 = 0.0;
  double mu = 0.0;

  double persistence() const noexcept { return a1 + b1; }
  double unconditional_variance() const noexcept { return omega / (1.0 - a1 - b1); }
};

struct GarchFit {
  GarchParams params;
  double log_likelihood = 0.0;
  double last_eps_sq = 0.0;  // squared innovation on the final window day
  double last_var = 0.0;     // conditional variance on the final window day
  bool fallback = false;     // constant-variance parameters were returned
  int iterations = 0;
};

struct GarchFitOptions {
  int max_iterations = 600;
  double simplex_tolerance = 1e-7;
};

/// Gaussian conditional log-likelihood of the GARCH(1,1) recursion with the
/// first conditional variance set to `initial_var`. Optionally reports the
/// final squared innovation and conditional variance.
double garch_log_likelihood(std::span<const double> returns, const GarchParams& params,
                            double initial_var, double* last_eps_sq = nullptr,
                            double* last_var = nullptr);

/// Quasi-maximum-likelihood GARCH(1,1) fit with a Nelder-Mead search over an
/// unconstrained reparameterization. Never throws on optimizer trouble; the
/// constant-variance fit is returned with `fallback` set instead.
GarchFit fit_garch11(std::span<const double> window, const GarchFitOptions& options = {});

/// omega + a1 * last_eps_sq + b1 * last_var
double garch_forecast(const GarchParams& params, double last_eps_sq, double last_var);

}  // namespace riskalloc
