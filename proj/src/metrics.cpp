#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "riskalloc/backtest.hpp"
#include "riskalloc/error.hpp"
#include "riskalloc/kernels.hpp"

namespace riskalloc {

double annualized_return(std::span<const double> p, double D) {
  if (p.empty()) fail(ErrorKind::Input, "annualized return of an empty series");
  return 100.0 * D / static_cast<double>(p.size()) * kernels::sum(p);
}

double annualized_volatility(std::span<const double> p, double D) {
  if (p.size() < 2) fail(ErrorKind::Input, "annualized volatility needs at least two periods");
  // A constant series has zero volatility exactly, whatever the rounding of its mean.
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  if (*lo == *hi) return 0.0;
  const double T = static_cast<double>(p.size());
  // Deviations are taken from the per-period mean.
  const double mean = kernels::sum(p) / T;
  return 100.0 * std::sqrt(D / T * kernels::sum_sq_dev(p, mean));
}

double sharpe_ratio(std::span<const double> p, double D) {
  const double vol = annualized_volatility(p, D);
  if (vol == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return annualized_return(p, D) / vol;
}

double max_drawdown(std::span<const double> values) {
  double peak = 0.0;
  double worst = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) fail(ErrorKind::Input, "portfolio value must be positive");
    if (v > peak) peak = v;
    const double dd = 1.0 - v / peak;
    if (dd > worst) worst = dd;
  }
  return 100.0 * worst;
}

std::vector<double> value_path(std::span<const double> p) {
  std::vector<double> v;
  v.reserve(p.size() + 1);
  v.push_back(1.0);
  for (double r : p) v.push_back(v.back() * (1.0 + r));
  return v;
}

Summary summarize(std::span<const double> p, double D) {
  Summary s;
  s.periods = p.size();
  s.average_cash = std::numeric_limits<double>::quiet_NaN();
  if (p.empty()) {
    s.sharpe = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.annual_return = annualized_return(p, D);
  if (p.size() >= 2) {
    s.annual_volatility = annualized_volatility(p, D);
    s.sharpe = s.annual_volatility == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                          : s.annual_return / s.annual_volatility;
  } else {
    s.annual_volatility = std::numeric_limits<double>::quiet_NaN();
    s.sharpe = std::numeric_limits<double>::quiet_NaN();
  }
  s.max_drawdown = max_drawdown(value_path(p));
  return s;
}

std::vector<AnnualRow> annual_breakdown(const BacktestResult& result, double D) {
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_year;  // returns, cash
  for (std::size_t t = 0; t < result.returns.size(); ++t) {
    auto& slot = by_year[year_of(result.realization_dates[t])];
    slot.first.push_back(result.returns[t]);
    if (t < result.cash.size()) slot.second.push_back(result.cash[t]);
  }
  std::vector<AnnualRow> rows;
  for (const auto& [year, series] : by_year) {
    AnnualRow row{year, summarize(series.first, D)};
    if (!series.second.empty()) row.metrics.average_cash = kernels::sum(series.second) / static_cast<double>(series.second.size());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace riskalloc
