#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "riskalloc/cra.hpp"
#include "riskalloc/marketdata.hpp"
#include "riskalloc/riskmodels.hpp"

namespace riskalloc {

enum class StrategyKind { Cra, Dd9010 };
enum class VolEstimatorKind { Ewma, Garch };
/// How the CRA scaling measures the risk of x*.
enum class RiskEstimate { ExAnte, Realized };

struct VolEstimatorConfig {
  VolEstimatorKind kind = VolEstimatorKind::Ewma;
  double half_life = 10.0;             // ewma
  std::size_t window = 250;            // garch
  std::size_t refit_every = 1;         // garch
  std::size_t min_observations = 30;   // ewma readiness

  bool operator==(const VolEstimatorConfig&) const = default;
};

/// Linear cap on the summed weight of a group of assets.
struct WeightCap {
  std::string name;
  std::vector<std::string> assets;
  double limit = 0.0;

  bool operator==(const WeightCap&) const = default;
};

struct StrategyConfig {
  StrategyKind kind = StrategyKind::Cra;
  std::vector<std::string> universe;
  std::vector<double> rho;               // cra; empty means risk parity
  std::vector<double> relative_weights;  // dd9010; empty means the 90/10 default
  double annual_risk_limit = 0.10;
  std::vector<WeightCap> caps;
  RiskEstimate risk_estimate = RiskEstimate::Realized;
  VolEstimatorConfig vol;
  IewmaOptions iewma;

  bool operator==(const StrategyConfig&) const = default;
};

/// 90% split equally over industry assets and 10% equally over crypto assets.
/// When one category is absent the other gets everything, equally split.
std::vector<double> default_relative_weights(const std::vector<AssetMeta>& meta);

/// Builds F and g for the caps over `universe`. Caps whose assets are all
/// outside the universe are dropped.
ConstraintSet build_constraints(const std::vector<std::string>& universe,
                                const std::vector<WeightCap>& caps, double sigma_daily);

PortfolioWeights cra_strategy_step(const Eigen::MatrixXd& sigma, const RiskAllocation& rho,
                                   const ConstraintSet& constraints,
                                   std::optional<double> realized_vol_of_xstar);

/// Exposure e = min{1, sigma_daily / vol_estimate, g_i / (F rel)_i};
/// w = e * rel, cash = 1 - e.
PortfolioWeights dd9010_step(const Eigen::VectorXd& relative_weights, double vol_estimate,
                             const ConstraintSet& constraints);

/// Streaming daily-volatility estimate of a return series.
class VolatilityEstimator {
 public:
  virtual ~VolatilityEstimator() = default;
  virtual void observe(double portfolio_return) = 0;
  /// Daily volatility forecast for the next period, once enough history exists.
  virtual std::optional<double> estimate() const = 0;
};

class EwmaVolatility final : public VolatilityEstimator {
 public:
  EwmaVolatility(double half_life, std::size_t min_observations);
  void observe(double portfolio_return) override;
  std::optional<double> estimate() const override;

 private:
  EwmaEstimator ewma_;
  std::size_t min_observations_;
};

/// GARCH(1,1) refit on a trailing window every `refit_every` observations;
/// between refits the conditional variance is rolled forward with the last
/// fitted parameters.
class GarchVolatility final : public VolatilityEstimator {
 public:
  GarchVolatility(std::size_t window, std::size_t refit_every);
  void observe(double portfolio_return) override;
  std::optional<double> estimate() const override;

  std::size_t fallback_count() const noexcept { return fallbacks_; }

 private:
  std::size_t window_;
  std::size_t refit_every_;
  std::deque<double> history_;
  std::optional<GarchParams> params_;
  double last_eps_sq_ = 0.0;
  double last_var_ = 0.0;
  std::size_t since_refit_ = 0;
  std::size_t fallbacks_ = 0;
};

std::unique_ptr<VolatilityEstimator> make_volatility_estimator(const VolEstimatorConfig& config);

}  // namespace riskalloc
