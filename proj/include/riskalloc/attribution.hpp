#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace riskalloc {

struct Player {
  std::string name;
  std::vector<std::string> assets;

  bool operator==(const Player&) const = default;
};

/// Metric vector for a coalition: one value per metric name.
using MetricVector = std::vector<double>;

/// Maps the union of a coalition's assets to its metric vector. Must be
/// deterministic and safe to call concurrently.
using CoalitionRunner = std::function<MetricVector(const std::vector<std::string>& assets)>;

/// Characteristic function over all 2^n coalitions, indexed by bitmask
/// (bit i set means player i is in the coalition). The empty coalition is
/// the all-cash portfolio and is zero in every metric.
class CoalitionValueTable {
 public:
  CoalitionValueTable(std::vector<Player> players, std::vector<std::string> metric_names);

  const std::vector<Player>& players() const noexcept { return players_; }
  const std::vector<std::string>& metric_names() const noexcept { return metric_names_; }
  std::size_t n_players() const noexcept { return players_.size(); }
  std::size_t size() const noexcept { return values_.size(); }

  void set(std::uint32_t mask, MetricVector v);
  bool has(std::uint32_t mask) const { return !values_.at(mask).empty(); }
  const MetricVector& at(std::uint32_t mask) const;
  bool complete() const;

  std::vector<std::string> assets_of(std::uint32_t mask) const;
  std::string describe(std::uint32_t mask) const;

 private:
  std::vector<Player> players_;
  std::vector<std::string> metric_names_;
  std::vector<MetricVector> values_;
};

inline const std::vector<std::string> kPortfolioMetricNames = {"Return (%)", "Volatility (%)", "Sharpe", "Drawdown (%)"};

/// Runs `runner` once per nonempty coalition, on up to `jobs` threads.
CoalitionValueTable enumerate_coalition_values(const std::vector<Player>& players, const CoalitionRunner& runner,
                                               const std::vector<std::string>& metric_names = kPortfolioMetricNames,
                                               unsigned jobs = 1);

struct ShapleyReport {
  std::vector<std::string> players;
  std::vector<std::string> metric_names;
  std::vector<std::vector<double>> phi;  // [player][metric]
  std::vector<double> totals;            // sum over players, per metric
  std::vector<double> grand;             // v(N) per metric
};

/// Exact Shapley values with coalition weights |S|! (n - |S| - 1)! / n!.
ShapleyReport shapley_values(const CoalitionValueTable& table);

}  // namespace riskalloc
