#include "riskalloc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "riskalloc/error.hpp"
#include "riskalloc/kernels.hpp"

namespace riskalloc {

LoadedData load_data(const std::filesystem::path& data_dir, const DataConfig& data) {
  const auto assets_path = data_dir / data.assets;
  const auto prices_path = data_dir / data.prices;
  if (!std::filesystem::exists(assets_path)) fail(ErrorKind::Data, "missing asset metadata file " + assets_path.string());
  if (!std::filesystem::exists(prices_path)) fail(ErrorKind::Data, "missing price file " + prices_path.string());
  const auto meta = load_asset_meta(assets_path);
  const auto prices = load_price_csv(prices_path, meta);
  const auto calendar = trading_calendar(prices);
  return LoadedData{align_and_compute_returns(prices, calendar), {assets_path, prices_path}};
}

BacktestResult run_experiment(const ReturnPanel& panel, const BacktestConfig& config) {
  const ReturnPanel universe = panel.select(config.strategy.universe);
  if (config.strategy.kind == StrategyKind::Cra) {
    const CovarianceSeries cov = iewma_covariance(universe, config.strategy.iewma);
    return run_backtest(universe, &cov, config);
  }
  return run_backtest(universe, nullptr, config);
}

namespace {

/// Restricts a strategy to `assets`, keeping universe order. Custom rho or
/// relative weights are renormalized over the kept assets.
BacktestConfig restrict_to(const BacktestConfig& base, const std::vector<std::string>& assets) {
  BacktestConfig c = base;
  const std::set<std::string> keep(assets.begin(), assets.end());
  auto& s = c.strategy;
  std::vector<std::string> universe;
  std::vector<double> rho, rel;
  for (std::size_t i = 0; i < base.strategy.universe.size(); ++i) {
    if (!keep.count(base.strategy.universe[i])) continue;
    universe.push_back(base.strategy.universe[i]);
    if (!base.strategy.rho.empty()) rho.push_back(base.strategy.rho[i]);
    if (!base.strategy.relative_weights.empty()) rel.push_back(base.strategy.relative_weights[i]);
  }
  const auto normalize = [](std::vector<double>& v) {
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v) x /= total;
  };
  normalize(rho);
  normalize(rel);
  s.universe = std::move(universe);
  s.rho = std::move(rho);
  s.relative_weights = std::move(rel);
  return c;
}

}  // namespace

ShapleyReport run_attribution(const ReturnPanel& panel, const ExperimentConfig& config, unsigned jobs,
                              CoalitionValueTable* table_out) {
  const auto& universe = config.backtest.strategy.universe;
  if (config.players.empty()) fail(ErrorKind::Config, "attribution needs a [players] section");
  std::set<std::string> covered;
  for (const auto& p : config.players)
    for (const auto& a : p.assets) {
      if (std::find(universe.begin(), universe.end(), a) == universe.end())
        fail(ErrorKind::Config, "player " + p.name + " holds " + a + ", which is outside the universe");
      if (!covered.insert(a).second) fail(ErrorKind::Config, "asset " + a + " assigned to two players");
    }
  if (covered.size() != universe.size()) fail(ErrorKind::Config, "players must cover the whole universe");

  // One covariance estimate for every coalition: IEWMA entries depend only on
  // their asset pair, so slicing equals re-estimating.
  const ReturnPanel base = panel.select(universe);
  std::optional<CovarianceSeries> cov;
  if (config.backtest.strategy.kind == StrategyKind::Cra) cov = iewma_covariance(base, config.backtest.strategy.iewma);

  const CoalitionRunner runner = [&](const std::vector<std::string>& assets) {
    const BacktestConfig restricted = restrict_to(config.backtest, assets);
    const BacktestResult r = run_backtest(base, cov ? &*cov : nullptr, restricted);
    const Summary& s = r.summary;
    return MetricVector{s.annual_return, s.annual_volatility, s.sharpe, s.max_drawdown};
  };
  CoalitionValueTable table = enumerate_coalition_values(config.players, runner, kPortfolioMetricNames, jobs);
  ShapleyReport report = shapley_values(table);
  if (table_out) *table_out = std::move(table);
  return report;
}

Comparison compare_results(const std::vector<std::string>& names, const std::vector<BacktestResult>& results,
                           double annualization) {
  if (names.size() != results.size() || results.size() < 2) fail(ErrorKind::Config, "compare needs at least two runs");

  // Value-path dates: first decision date, then each realization date.
  const auto path_dates = [](const BacktestResult& r) {
    std::vector<Date> d;
    d.push_back(r.decision_dates.front());
    d.insert(d.end(), r.realization_dates.begin(), r.realization_dates.end());
    return d;
  };
  std::vector<Date> common = path_dates(results.front());
  for (std::size_t k = 1; k < results.size(); ++k) {
    const auto other = path_dates(results[k]);
    std::vector<Date> next;
    std::set_intersection(common.begin(), common.end(), other.begin(), other.end(), std::back_inserter(next));
    common = std::move(next);
  }
  if (common.size() < 2) {
    std::string ranges;
    for (std::size_t k = 0; k < results.size(); ++k) {
      const auto d = path_dates(results[k]);
      ranges += " " + names[k] + "=[" + format_date(d.front()) + ", " + format_date(d.back()) + "]";
    }
    fail(ErrorKind::Config, "runs share no common dates:" + ranges);
  }

  Comparison c;
  c.names = names;
  c.dates = common;
  for (const auto& r : results) {
    const auto dates = path_dates(r);
    std::vector<double> values, returns, cash;
    for (const auto& d : common) {
      const auto i = static_cast<std::size_t>(std::lower_bound(dates.begin(), dates.end(), d) - dates.begin());
      values.push_back(r.values[i]);
    }
    const double base = values.front();
    for (double& v : values) v /= base;
    // Periods whose decision and realization both fall in the common window.
    for (std::size_t t = 0; t < r.returns.size(); ++t)
      if (!(r.decision_dates[t] < common.front()) && !(common.back() < r.realization_dates[t])) {
        returns.push_back(r.returns[t]);
        cash.push_back(r.cash[t]);
      }
    Summary s = summarize(returns, annualization);
    s.average_cash = kernels::sum(cash) / static_cast<double>(cash.size());
    c.values.push_back(std::move(values));
    c.summaries.push_back(s);
  }
  return c;
}

}  // namespace riskalloc
