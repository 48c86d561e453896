#include "riskalloc/strategies.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "riskalloc/error.hpp"

namespace riskalloc {

std::vector<double> default_relative_weights(const std::vector<AssetMeta>& meta) {
  std::size_t industry = 0, crypto = 0;
  for (const auto& m : meta) (m.category == Category::Crypto ? crypto : industry) += 1;
  const double industry_share = crypto == 0 ? 1.0 : (industry == 0 ? 0.0 : 0.9);
  const double crypto_share = 1.0 - industry_share;
  std::vector<double> out;
  for (const auto& m : meta)
    out.push_back(m.category == Category::Crypto ? crypto_share / static_cast<double>(crypto)
                                                 : industry_share / static_cast<double>(industry));
  return out;
}

ConstraintSet build_constraints(const std::vector<std::string>& universe, const std::vector<WeightCap>& caps,
                                double sigma_daily) {
  const auto n = static_cast<Eigen::Index>(universe.size());
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> bounds;
  for (const auto& cap : caps) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
    for (const auto& id : cap.assets) {
      const auto it = std::find(universe.begin(), universe.end(), id);
      if (it != universe.end()) row(it - universe.begin()) = 1.0;
    }
    if ((row.array() > 0.0).any()) {
      rows.push_back(row);
      bounds.push_back(cap.limit);
    }
  }
  ConstraintSet c{sigma_daily, Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()), n),
                  Eigen::VectorXd(static_cast<Eigen::Index>(rows.size()))};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    c.F.row(static_cast<Eigen::Index>(i)) = rows[i];
    c.g(static_cast<Eigen::Index>(i)) = bounds[i];
  }
  c.validate(n);
  return c;
}

PortfolioWeights cra_strategy_step(const Eigen::MatrixXd& sigma, const RiskAllocation& rho,
                                   const ConstraintSet& constraints, std::optional<double> realized_vol_of_xstar) {
  return cra_portfolio(sigma, rho, constraints, realized_vol_of_xstar);
}

PortfolioWeights dd9010_step(const Eigen::VectorXd& relative_weights, double vol_estimate,
                             const ConstraintSet& constraints) {
  if (!(vol_estimate > 0.0) || !std::isfinite(vol_estimate))
    fail(ErrorKind::Input, "volatility estimate must be positive");
  if ((relative_weights.array() < 0.0).any() || std::abs(relative_weights.sum() - 1.0) > 1e-12)
    fail(ErrorKind::Parameter, "relative weights must be nonnegative and sum to one");
  constraints.validate(relative_weights.size());

  double exposure = std::min(1.0, constraints.sigma_daily / vol_estimate);
  if (constraints.F.rows() > 0) {
    const Eigen::VectorXd fr = constraints.F * relative_weights;
    for (Eigen::Index i = 0; i < fr.size(); ++i)
      if (fr(i) > 0.0) exposure = std::min(exposure, constraints.g(i) / fr(i));
  }
  return PortfolioWeights{exposure * relative_weights, 1.0 - exposure};
}

EwmaVolatility::EwmaVolatility(double half_life, std::size_t min_observations)
    : ewma_(half_life), min_observations_(min_observations) {}

void EwmaVolatility::observe(double portfolio_return) { ewma_ = ewma_.update(portfolio_return); }

std::optional<double> EwmaVolatility::estimate() const {
  if (ewma_.count() < std::max<std::size_t>(1, min_observations_)) return std::nullopt;
  return ewma_.volatility();
}

GarchVolatility::GarchVolatility(std::size_t window, std::size_t refit_every)
    : window_(window), refit_every_(std::max<std::size_t>(1, refit_every)) {
  if (window_ < 50) fail(ErrorKind::Parameter, "GARCH window must be at least 50");
}

void GarchVolatility::observe(double portfolio_return) {
  history_.push_back(portfolio_return);
  if (history_.size() > window_) history_.pop_front();
  ++since_refit_;
  if (history_.size() == window_ && (!params_ || since_refit_ >= refit_every_)) {
    const std::vector<double> window(history_.begin(), history_.end());
    const GarchFit fit = fit_garch11(window);
    if (fit.fallback) {
      ++fallbacks_;
      spdlog::debug("GARCH fit fell back to constant variance");
    }
    params_ = fit.params;
    last_eps_sq_ = fit.last_eps_sq;
    last_var_ = fit.last_var;
    since_refit_ = 0;
  } else if (params_) {
    last_var_ = garch_forecast(*params_, last_eps_sq_, last_var_);
    const double eps = portfolio_return - params_->mu;
    last_eps_sq_ = eps * eps;
  }
}

std::optional<double> GarchVolatility::estimate() const {
  if (!params_) return std::nullopt;
  return std::sqrt(garch_forecast(*params_, last_eps_sq_, last_var_));
}

std::unique_ptr<VolatilityEstimator> make_volatility_estimator(const VolEstimatorConfig& config) {
  if (config.kind == VolEstimatorKind::Garch)
    return std::make_unique<GarchVolatility>(config.window, config.refit_every);
  return std::make_unique<EwmaVolatility>(config.half_life, config.min_observations);
}

}  // namespace riskalloc
