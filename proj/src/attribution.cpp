#include "riskalloc/attribution.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "riskalloc/error.hpp"

namespace riskalloc {

namespace {
constexpr std::size_t kMaxPlayers = 16;
}

CoalitionValueTable::CoalitionValueTable(std::vector<Player> players, std::vector<std::string> metric_names)
    : players_(std::move(players)), metric_names_(std::move(metric_names)) {
  if (players_.empty()) fail(ErrorKind::Input, "attribution needs at least one player");
  if (players_.size() > kMaxPlayers) fail(ErrorKind::Input, "attribution supports at most 16 players");
  if (metric_names_.empty()) fail(ErrorKind::Input, "attribution needs at least one metric");
  std::set<std::string> names, assets;
  for (const auto& p : players_) {
    if (!names.insert(p.name).second) fail(ErrorKind::Input, "duplicate player " + p.name);
    if (p.assets.empty()) fail(ErrorKind::Input, "player " + p.name + " has no assets");
    for (const auto& a : p.assets)
      if (!assets.insert(a).second) fail(ErrorKind::Input, "asset " + a + " belongs to more than one player");
  }
  values_.resize(std::size_t{1} << players_.size());
  values_[0] = MetricVector(metric_names_.size(), 0.0);
}

void CoalitionValueTable::set(std::uint32_t mask, MetricVector v) {
  if (mask >= values_.size()) fail(ErrorKind::Input, "coalition mask out of range");
  if (v.size() != metric_names_.size()) fail(ErrorKind::Input, "metric vector has the wrong length");
  values_[mask] = std::move(v);
}

const MetricVector& CoalitionValueTable::at(std::uint32_t mask) const {
  const auto& v = values_.at(mask);
  if (v.empty()) fail(ErrorKind::Input, "coalition value missing for " + describe(mask));
  return v;
}

bool CoalitionValueTable::complete() const {
  return std::none_of(values_.begin(), values_.end(), [](const MetricVector& v) { return v.empty(); });
}

std::vector<std::string> CoalitionValueTable::assets_of(std::uint32_t mask) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < players_.size(); ++i)
    if (mask & (1u << i)) out.insert(out.end(), players_[i].assets.begin(), players_[i].assets.end());
  return out;
}

std::string CoalitionValueTable::describe(std::uint32_t mask) const {
  std::string s = "{";
  for (std::size_t i = 0; i < players_.size(); ++i)
    if (mask & (1u << i)) {
      if (s.size() > 1) s += ", ";
      s += players_[i].name;
    }
  return s + "}";
}

CoalitionValueTable enumerate_coalition_values(const std::vector<Player>& players, const CoalitionRunner& runner,
                                               const std::vector<std::string>& metric_names, unsigned jobs) {
  CoalitionValueTable table(players, metric_names);
  const auto count = static_cast<std::uint32_t>(table.size());
  std::vector<MetricVector> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::uint32_t> next{1};

  const auto worker = [&] {
    for (std::uint32_t mask = next++; mask < count; mask = next++) {
      try {
        results[mask] = runner(table.assets_of(mask));
      } catch (...) {
        errors[mask] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::clamp(jobs, 1u, count > 1 ? count - 1 : 1u);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  // Report the lowest failing mask so the message is independent of scheduling.
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    if (!errors[mask]) continue;
    try {
      std::rethrow_exception(errors[mask]);
    } catch (const Error& e) {
      throw Error(e.kind(), "coalition " + table.describe(mask) + ": " + e.what());
    } catch (const std::exception& e) {
      fail(ErrorKind::Input, "coalition " + table.describe(mask) + ": " + e.what());
    }
  }
  for (std::uint32_t mask = 1; mask < count; ++mask) table.set(mask, std::move(results[mask]));
  return table;
}

ShapleyReport shapley_values(const CoalitionValueTable& table) {
  if (!table.complete()) fail(ErrorKind::Input, "coalition value table is incomplete");
  const std::size_t n = table.n_players();
  const std::size_t m = table.metric_names().size();

  std::vector<double> factorial(n + 1, 1.0);
  for (std::size_t k = 1; k <= n; ++k) factorial[k] = factorial[k - 1] * static_cast<double>(k);

  ShapleyReport report;
  for (const auto& p : table.players()) report.players.push_back(p.name);
  report.metric_names = table.metric_names();
  report.phi.assign(n, std::vector<double>(m, 0.0));

  const auto full = static_cast<std::uint32_t>(table.size() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    for (std::uint32_t s = 0; s <= full; ++s) {
      if (s & bit) continue;
      const auto size = static_cast<std::size_t>(std::popcount(s));
      const double weight = factorial[size] * factorial[n - size - 1] / factorial[n];
      const auto& with = table.at(s | bit);
      const auto& without = table.at(s);
      for (std::size_t k = 0; k < m; ++k) report.phi[i][k] += weight * (with[k] - without[k]);
    }
  }
  report.totals.assign(m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) report.totals[k] += report.phi[i][k];
  report.grand = table.at(full);
  return report;
}

}  // namespace riskalloc
