#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

#include "riskalloc/backtest.hpp"
#include "riskalloc/error.hpp"
#include "riskalloc/kernels.hpp"

namespace riskalloc {

namespace {

std::size_t first_index_on_or_after(const std::vector<Date>& dates, const Date& d) {
  return static_cast<std::size_t>(std::lower_bound(dates.begin(), dates.end(), d) - dates.begin());
}

RiskAllocation allocation_for(const StrategyConfig& s, Eigen::Index n) {
  if (s.rho.empty()) return RiskAllocation::parity(n);
  if (static_cast<Eigen::Index>(s.rho.size()) != n) fail(ErrorKind::Config, "rho must have one entry per universe asset");
  return RiskAllocation(Eigen::Map<const Eigen::VectorXd>(s.rho.data(), n));
}

Eigen::VectorXd relative_weights_for(const StrategyConfig& s, const std::vector<AssetMeta>& meta) {
  const auto n = static_cast<Eigen::Index>(meta.size());
  const std::vector<double> rel = s.relative_weights.empty() ? default_relative_weights(meta) : s.relative_weights;
  if (static_cast<Eigen::Index>(rel.size()) != n)
    fail(ErrorKind::Config, "relative_weights must have one entry per universe asset");
  return Eigen::Map<const Eigen::VectorXd>(rel.data(), n);
}

}  // namespace

BacktestResult run_backtest(const ReturnPanel& full_panel, const CovarianceSeries* full_cov,
                            const BacktestConfig& config) {
  const StrategyConfig& strategy = config.strategy;
  if (strategy.universe.empty()) fail(ErrorKind::Config, "strategy universe is empty");
  if (!(config.annualization > 0.0)) fail(ErrorKind::Config, "annualization factor must be positive");

  const ReturnPanel panel = full_panel.select(strategy.universe);
  const std::size_t N = panel.n_dates();
  const auto n = static_cast<Eigen::Index>(panel.n_assets());
  const auto& R = panel.returns();

  std::optional<CovarianceSeries> cov;
  if (strategy.kind == StrategyKind::Cra) {
    if (!full_cov) fail(ErrorKind::Config, "CRA backtest needs a covariance series");
    if (full_cov->dates() != full_panel.dates()) fail(ErrorKind::Config, "covariance series is not aligned to the return panel");
    std::vector<std::size_t> idx;
    for (const auto& id : strategy.universe) {
      const auto it = std::find(full_cov->asset_ids().begin(), full_cov->asset_ids().end(), id);
      if (it == full_cov->asset_ids().end()) fail(ErrorKind::Config, "covariance series lacks asset " + id);
      idx.push_back(static_cast<std::size_t>(it - full_cov->asset_ids().begin()));
    }
    cov = full_cov->select(idx);
  }

  // First decision index: past burn-in, inside the requested window, and on a
  // mature covariance estimate.
  std::size_t first = config.burn_in;
  if (config.start) first = std::max(first, first_index_on_or_after(panel.dates(), *config.start));
  if (cov) first = std::max(first, cov->first_mature());
  // Last decision index: its realization date must not pass `end`.
  std::size_t stop = N == 0 ? 0 : N - 1;  // exclusive
  if (config.end) {
    const auto last_real = static_cast<std::size_t>(
        std::upper_bound(panel.dates().begin(), panel.dates().end(), *config.end) - panel.dates().begin());
    stop = std::min(stop, last_real == 0 ? 0 : last_real - 1);
  }
  if (first >= stop) fail(ErrorKind::Config, "burn-in and date window leave no trading periods");

  const double sigma_daily = daily_risk_limit(strategy.annual_risk_limit, config.annualization);
  const ConstraintSet constraints = build_constraints(strategy.universe, strategy.caps, sigma_daily);

  BacktestResult result;
  result.asset_ids = strategy.universe;
  const std::size_t T = stop - first;
  result.weights.resize(static_cast<Eigen::Index>(T), n);
  result.cash.reserve(T);
  result.returns.reserve(T);

  std::vector<double> w_buf(static_cast<std::size_t>(n));
  const auto record = [&](std::size_t t, const PortfolioWeights& pw) {
    const std::size_t k = t - first;
    result.weights.row(static_cast<Eigen::Index>(k)) = pw.w.transpose();
    result.cash.push_back(pw.cash);
    for (Eigen::Index i = 0; i < n; ++i) w_buf[static_cast<std::size_t>(i)] = pw.w(i);
    const double* next = R.row(static_cast<Eigen::Index>(t + 1)).data();
    result.returns.push_back(kernels::dot(w_buf, std::span<const double>(next, static_cast<std::size_t>(n))));
    result.decision_dates.push_back(panel.dates()[t]);
    result.realization_dates.push_back(panel.dates()[t + 1]);
  };

  if (strategy.kind == StrategyKind::Cra) {
    const RiskAllocation rho = allocation_for(strategy, n);
    auto realized = make_volatility_estimator(strategy.vol);
    std::optional<Eigen::VectorXd> prev_x;
    for (std::size_t t = 0; t < stop; ++t) {
      const std::span<const double> r_t(R.row(static_cast<Eigen::Index>(t)).data(), static_cast<std::size_t>(n));
      if (prev_x) realized->observe(kernels::dot(std::span<const double>(prev_x->data(), r_t.size()), r_t));

      const bool trading = t >= first;
      std::optional<SolverResult> solved;
      try {
        solved = solve_risk_allocation(cov->sigma(t), rho);
      } catch (const Error& e) {
        if (trading) throw;
        spdlog::debug("{}: skipping x* before trading starts: {}", format_date(panel.dates()[t]), e.what());
      }
      prev_x = solved ? std::optional<Eigen::VectorXd>(solved->x) : std::nullopt;
      if (!trading) continue;

      result.solver_iterations += static_cast<std::size_t>(solved->iterations);
      std::optional<double> risk;
      if (strategy.risk_estimate == RiskEstimate::Realized) {
        risk = realized->estimate();
        if (!risk || !(*risk > 0.0)) {
          record(t, PortfolioWeights::all_cash(n));
          continue;
        }
      } else {
        risk = std::sqrt(solved->x.dot(cov->sigma(t) * solved->x));
      }
      record(t, scale_to_constraints(solved->x, *risk, constraints));
    }
    if (auto* g = dynamic_cast<GarchVolatility*>(realized.get())) result.estimator_fallbacks = g->fallback_count();
  } else {
    const Eigen::VectorXd rel = relative_weights_for(strategy, panel.meta());
    auto estimator = make_volatility_estimator(strategy.vol);
    for (std::size_t t = 0; t < stop; ++t) {
      const std::span<const double> r_t(R.row(static_cast<Eigen::Index>(t)).data(), static_cast<std::size_t>(n));
      estimator->observe(kernels::dot(std::span<const double>(rel.data(), r_t.size()), r_t));
      if (t < first) continue;
      const auto vol = estimator->estimate();
      if (!vol || !(*vol > 0.0)) {
        record(t, PortfolioWeights::all_cash(n));
        continue;
      }
      record(t, dd9010_step(rel, *vol, constraints));
    }
    if (auto* g = dynamic_cast<GarchVolatility*>(estimator.get())) result.estimator_fallbacks = g->fallback_count();
  }

  result.values = value_path(result.returns);
  result.summary = summarize(result.returns, config.annualization);
  result.summary.average_cash = kernels::sum(result.cash) / static_cast<double>(result.cash.size());
  result.annual = annual_breakdown(result, config.annualization);
  return result;
}

}  // namespace riskalloc
