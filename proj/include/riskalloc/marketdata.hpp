#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskalloc/date.hpp"

namespace riskalloc {

/// Dates x assets, one contiguous row per date.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Category { Industry, Crypto };

std::string_view to_string(Category c) noexcept;
std::optional<Category> parse_category(std::string_view text);

struct AssetMeta {
  std::string asset_id;
  Category category = Category::Industry;
  std::string display_name;

  bool operator==(const AssetMeta&) const = default;
};

/// Close prices on calendar dates. Missing values are NaN; present values are
/// strictly positive.
class PricePanel {
 public:
  PricePanel(std::vector<Date> dates, RowMatrix prices, std::vector<AssetMeta> meta);

  const std::vector<Date>& dates() const noexcept { return dates_; }
  const RowMatrix& prices() const noexcept { return prices_; }
  const std::vector<AssetMeta>& meta() const noexcept { return meta_; }
  std::size_t n_assets() const noexcept { return meta_.size(); }

  bool has_price(std::size_t row, std::size_t asset) const;

  bool operator==(const PricePanel& other) const;

 private:
  std::vector<Date> dates_;
  RowMatrix prices_;
  std::vector<AssetMeta> meta_;
};

/// Simple returns between consecutive trading dates. Row k holds the return
/// from start_date() (k = 0) or dates()[k-1] to dates()[k].
class ReturnPanel {
 public:
  ReturnPanel(Date start_date, std::vector<Date> dates, RowMatrix returns,
              std::vector<AssetMeta> meta);

  Date start_date() const noexcept { return start_date_; }
  const std::vector<Date>& dates() const noexcept { return dates_; }
  const RowMatrix& returns() const noexcept { return returns_; }
  const std::vector<AssetMeta>& meta() const noexcept { return meta_; }
  std::size_t n_dates() const noexcept { return dates_.size(); }
  std::size_t n_assets() const noexcept { return meta_.size(); }

  std::optional<std::size_t> index_of(std::string_view asset_id) const;
  std::vector<std::size_t> indices_of(const std::vector<std::string>& asset_ids) const;

  /// Panel restricted to the given assets, in the given order.
  ReturnPanel select(const std::vector<std::string>& asset_ids) const;

  /// Panel restricted to dates in [first, last] (inclusive).
  ReturnPanel slice_dates(std::optional<Date> first, std::optional<Date> last) const;

 private:
  Date start_date_;
  std::vector<Date> dates_;
  RowMatrix returns_;
  std::vector<AssetMeta> meta_;
};

std::vector<AssetMeta> load_asset_meta(const std::filesystem::path& path);
void write_asset_meta(const std::filesystem::path& path, const std::vector<AssetMeta>& meta);

/// Reads `date,<asset_id>,...`. Empty cells (or NA/NaN) mark missing prices.
PricePanel load_price_csv(const std::filesystem::path& path, const std::vector<AssetMeta>& meta);

/// Writes prices with round-trip precision; missing values become empty cells.
void write_price_csv(const std::filesystem::path& path, const PricePanel& panel);

/// Dates on which every industry asset has a price.
std::vector<Date> trading_calendar(const PricePanel& panel);

/// Returns between consecutive calendar dates. Crypto returns span the
/// intervening non-trading days; a crypto price missing on a calendar date is
/// forward-filled from its last close.
ReturnPanel align_and_compute_returns(const PricePanel& panel, const std::vector<Date>& calendar);

struct SyntheticSpec {
  std::size_t n_assets = 1;
  std::size_t n_days = 0;
  std::vector<double> daily_vols;  // one per asset
  RowMatrix correlation;           // n_assets x n_assets; empty means identity
  std::uint64_t seed = 0;
  std::vector<AssetMeta> meta;     // optional; defaults to A0.. industry assets
};

/// Zero-mean Gaussian returns with the requested volatilities and correlation.
ReturnPanel synthetic_panel(const SyntheticSpec& spec);

struct FixtureSpec {
  Date first = Date{std::chrono::year{2017}, std::chrono::September, std::chrono::day{8}};
  Date last = Date{std::chrono::year{2024}, std::chrono::September, std::chrono::day{22}};
  std::uint64_t seed = 20240922;
};

/// Six-asset price fixture (four industries, BTC, ETH) with crypto prices on
/// every calendar day and industry prices on weekdays. Volatility levels,
/// correlations and a turbulent stretch are chosen to resemble the mixed
/// traditional/crypto universe; the series are synthetic.
PricePanel synthetic_price_fixture(const FixtureSpec& spec);

}  // namespace riskalloc
