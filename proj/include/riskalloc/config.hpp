#pragma once

// Experiment configuration files.
//
// INI-style text: `[section]` headers followed by `key = value` lines; `;` or
// `#` start comments. Lists are comma separated. Recognized sections/keys:
//
//   [experiment]  name
//   [data]        prices, assets                 file names inside the data dir
//   [backtest]    burn_in, annualization, start, end
//   [strategy]    kind (cra|dd9010), universe, risk_limit (annualized),
//                 risk_estimate (realized|ex_ante), rho, relative_weights,
//                 vol_half_life, corr_half_life
//   [volatility]  estimator (ewma|garch), half_life, window, refit_every,
//                 min_observations
//   [caps]        <name> = <asset>, <asset> <= <limit>
//   [players]     <name> = <asset>, <asset>      Shapley players, in order
//
// Unknown sections or keys are rejected.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "riskalloc/attribution.hpp"
#include "riskalloc/backtest.hpp"

namespace riskalloc {

struct DataConfig {
  std::string prices = "prices.csv";
  std::string assets = "assets.csv";

  bool operator==(const DataConfig&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DataConfig data;
  BacktestConfig backtest;
  std::vector<Player> players;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace riskalloc
