#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskalloc/date.hpp"
#include "riskalloc/marketdata.hpp"
#include "riskalloc/riskmodels.hpp"
#include "riskalloc/strategies.hpp"

namespace riskalloc {

struct BacktestConfig {
  std::size_t burn_in = 250;
  double annualization = 250.0;  // trading days per year, D
  std::optional<Date> start;
  std::optional<Date> end;
  StrategyConfig strategy;

  bool operator==(const BacktestConfig&) const = default;
};

/// Percent-valued except for the Sharpe ratio. sharpe is NaN when the
/// volatility is zero.
struct Summary {
  double annual_return = 0.0;
  double annual_volatility = 0.0;
  double sharpe = 0.0;
  double max_drawdown = 0.0;
  double average_cash = 0.0;  // fraction; NaN when not tracked
  std::size_t periods = 0;
};

struct AnnualRow {
  int year = 0;
  Summary metrics;
};

/// Weights w_t are decided at the close of decision_dates[t] and earn the
/// next trading-day return, returns[t], realized at realization_dates[t].
/// values[0] = 1 at the first decision date; values[t + 1] = (1 + returns[t]) values[t].
struct BacktestResult {
  std::vector<std::string> asset_ids;
  std::vector<Date> decision_dates;
  std::vector<Date> realization_dates;
  RowMatrix weights;
  std::vector<double> cash;
  std::vector<double> returns;
  std::vector<double> values;
  Summary summary;
  std::vector<AnnualRow> annual;
  std::size_t solver_iterations = 0;
  std::size_t estimator_fallbacks = 0;
};

// Metrics. D is the annualization factor.

/// (D / T) * sum p, in percent.
double annualized_return(std::span<const double> p, double D);
/// sqrt((D / T) * sum (p - mean p)^2), in percent.
double annualized_volatility(std::span<const double> p, double D);
/// Annualized return over annualized volatility; NaN when volatility is zero.
double sharpe_ratio(std::span<const double> p, double D);
/// Largest fractional drop from a running peak, in percent. O(T).
double max_drawdown(std::span<const double> values);
/// Compounded value path of length T + 1 starting at 1.
std::vector<double> value_path(std::span<const double> p);

/// Return, volatility, Sharpe, drawdown of a return series (average_cash NaN).
Summary summarize(std::span<const double> p, double D);

/// Per calendar year of the realization dates, same formulas.
std::vector<AnnualRow> annual_breakdown(const BacktestResult& result, double D);

/// The covariance series is required for CRA and ignored for DD90/10. It must
/// cover the panel's dates and assets (the universe is selected from both).
BacktestResult run_backtest(const ReturnPanel& panel, const CovarianceSeries* cov, const BacktestConfig& config);

}  // namespace riskalloc
