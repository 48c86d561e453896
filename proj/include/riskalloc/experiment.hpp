#pragma once

// Orchestration shared by the CLI and the acceptance suite: load a data
// directory, run a configured backtest, enumerate coalition backtests for
// Shapley attribution, align several runs for comparison.

#include <filesystem>
#include <string>
#include <vector>

#include "riskalloc/attribution.hpp"
#include "riskalloc/backtest.hpp"
#include "riskalloc/config.hpp"
#include "riskalloc/report.hpp"

namespace riskalloc {

struct LoadedData {
  ReturnPanel panel;
  std::vector<std::filesystem::path> files;
};

/// Reads <data_dir>/<assets> and <data_dir>/<prices>, derives the trading
/// calendar from the industry series and computes trading-day returns.
LoadedData load_data(const std::filesystem::path& data_dir, const DataConfig& data);

/// Estimates the IEWMA covariance on the strategy universe when the strategy
/// needs one, then runs the backtest.
BacktestResult run_experiment(const ReturnPanel& panel, const BacktestConfig& config);

/// Shapley attribution of the configured strategy over `config.players`,
/// which must partition the strategy universe.
ShapleyReport run_attribution(const ReturnPanel& panel, const ExperimentConfig& config, unsigned jobs = 1,
                              CoalitionValueTable* table_out = nullptr);

/// Aligns runs on their common value-path dates and recomputes metrics over
/// that window. Throws a configuration error when the runs share no dates.
Comparison compare_results(const std::vector<std::string>& names, const std::vector<BacktestResult>& results,
                           double annualization);

}  // namespace riskalloc
