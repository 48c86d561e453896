#include "riskalloc/marketdata.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "riskalloc/error.hpp"

namespace riskalloc {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(Category c) noexcept {
  return c == Category::Crypto ? "crypto" : "industry";
}

std::optional<Category> parse_category(std::string_view text) {
  if (text == "industry") return Category::Industry;
  if (text == "crypto") return Category::Crypto;
  return std::nullopt;
}

PricePanel::PricePanel(std::vector<Date> dates, RowMatrix prices, std::vector<AssetMeta> meta)
    : dates_(std::move(dates)), prices_(std::move(prices)), meta_(std::move(meta)) {
  if (static_cast<std::size_t>(prices_.rows()) != dates_.size() ||
      static_cast<std::size_t>(prices_.cols()) != meta_.size())
    fail(ErrorKind::Schema, "price matrix shape does not match dates x assets");
  for (std::size_t i = 1; i < dates_.size(); ++i)
    if (!(dates_[i - 1] < dates_[i]))
      fail(ErrorKind::Schema, "dates not strictly increasing at " + format_date(dates_[i]));
  std::set<std::string> ids;
  for (const auto& m : meta_)
    if (!ids.insert(m.asset_id).second) fail(ErrorKind::Schema, "duplicate asset id " + m.asset_id);
  for (Eigen::Index r = 0; r < prices_.rows(); ++r)
    for (Eigen::Index c = 0; c < prices_.cols(); ++c) {
      const double p = prices_(r, c);
      if (!std::isnan(p) && !(p > 0.0 && std::isfinite(p)))
        fail(ErrorKind::Data, "non-positive price for " + meta_[c].asset_id + " on " +
                                  format_date(dates_[r]));
    }
}

bool PricePanel::has_price(std::size_t row, std::size_t asset) const {
  return !std::isnan(prices_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(asset)));
}

bool PricePanel::operator==(const PricePanel& other) const {
  if (dates_ != other.dates_ || meta_ != other.meta_) return false;
  if (prices_.rows() != other.prices_.rows() || prices_.cols() != other.prices_.cols()) return false;
  for (Eigen::Index r = 0; r < prices_.rows(); ++r)
    for (Eigen::Index c = 0; c < prices_.cols(); ++c) {
      const double a = prices_(r, c), b = other.prices_(r, c);
      if (std::isnan(a) != std::isnan(b)) return false;
      if (!std::isnan(a) && a != b) return false;
    }
  return true;
}

ReturnPanel::ReturnPanel(Date start_date, std::vector<Date> dates, RowMatrix returns,
                         std::vector<AssetMeta> meta)
    : start_date_(start_date),
      dates_(std::move(dates)),
      returns_(std::move(returns)),
      meta_(std::move(meta)) {
  if (static_cast<std::size_t>(returns_.rows()) != dates_.size() ||
      static_cast<std::size_t>(returns_.cols()) != meta_.size())
    fail(ErrorKind::Schema, "return matrix shape does not match dates x assets");
  for (std::size_t i = 0; i < dates_.size(); ++i) {
    const Date prev = i == 0 ? start_date_ : dates_[i - 1];
    if (!(prev < dates_[i]))
      fail(ErrorKind::Schema, "return dates not strictly increasing at " + format_date(dates_[i]));
  }
  for (Eigen::Index r = 0; r < returns_.rows(); ++r)
    for (Eigen::Index c = 0; c < returns_.cols(); ++c)
      if (!(returns_(r, c) > -1.0) || !std::isfinite(returns_(r, c)))
        fail(ErrorKind::Data, "invalid return for " + meta_[c].asset_id + " on " +
                                  format_date(dates_[r]));
}

std::optional<std::size_t> ReturnPanel::index_of(std::string_view asset_id) const {
  for (std::size_t i = 0; i < meta_.size(); ++i)
    if (meta_[i].asset_id == asset_id) return i;
  return std::nullopt;
}

std::vector<std::size_t> ReturnPanel::indices_of(const std::vector<std::string>& asset_ids) const {
  std::vector<std::size_t> idx;
  idx.reserve(asset_ids.size());
  for (const auto& id : asset_ids) {
    const auto i = index_of(id);
    if (!i) fail(ErrorKind::Schema, "unknown asset " + id);
    idx.push_back(*i);
  }
  return idx;
}

ReturnPanel ReturnPanel::select(const std::vector<std::string>& asset_ids) const {
  const auto idx = indices_of(asset_ids);
  RowMatrix sub(returns_.rows(), static_cast<Eigen::Index>(idx.size()));
  std::vector<AssetMeta> meta;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    sub.col(static_cast<Eigen::Index>(j)) = returns_.col(static_cast<Eigen::Index>(idx[j]));
    meta.push_back(meta_[idx[j]]);
  }
  return ReturnPanel(start_date_, dates_, std::move(sub), std::move(meta));
}

ReturnPanel ReturnPanel::slice_dates(std::optional<Date> first, std::optional<Date> last) const {
  std::size_t lo = 0, hi = dates_.size();
  if (first) lo = static_cast<std::size_t>(std::lower_bound(dates_.begin(), dates_.end(), *first) - dates_.begin());
  if (last) hi = static_cast<std::size_t>(std::upper_bound(dates_.begin(), dates_.end(), *last) - dates_.begin());
  if (lo >= hi) fail(ErrorKind::Config, "date range selects no trading dates");
  const Date start = lo == 0 ? start_date_ : dates_[lo - 1];
  RowMatrix sub = returns_.middleRows(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(hi - lo));
  return ReturnPanel(start, std::vector<Date>(dates_.begin() + static_cast<long>(lo), dates_.begin() + static_cast<long>(hi)),
                     std::move(sub), meta_);
}

std::vector<AssetMeta> load_asset_meta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Data, "cannot open asset metadata " + path.string());
  std::string line;
  std::size_t lineno = 0;
  std::vector<AssetMeta> meta;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (lineno == 1) {
      if (cells.size() != 3 || trim(cells[0]) != "asset_id" || trim(cells[1]) != "category" ||
          trim(cells[2]) != "display_name")
        fail(ErrorKind::Schema, where(path, lineno) + ": expected header asset_id,category,display_name");
      continue;
    }
    if (cells.size() != 3) fail(ErrorKind::Parse, where(path, lineno) + ": expected 3 fields");
    const auto cat = parse_category(trim(cells[1]));
    if (!cat) fail(ErrorKind::Parse, where(path, lineno) + ": unknown category '" + cells[1] + "'");
    AssetMeta m{trim(cells[0]), *cat, trim(cells[2])};
    if (m.asset_id.empty()) fail(ErrorKind::Parse, where(path, lineno) + ": empty asset_id");
    if (!seen.insert(m.asset_id).second)
      fail(ErrorKind::Schema, where(path, lineno) + ": duplicate asset_id " + m.asset_id);
    meta.push_back(std::move(m));
  }
  if (meta.empty()) fail(ErrorKind::Schema, path.string() + ": no assets");
  return meta;
}

void write_asset_meta(const std::filesystem::path& path, const std::vector<AssetMeta>& meta) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Data, "cannot write " + path.string());
  out << "asset_id,category,display_name\n";
  for (const auto& m : meta) out << m.asset_id << ',' << to_string(m.category) << ',' << m.display_name << '\n';
}

PricePanel load_price_csv(const std::filesystem::path& path, const std::vector<AssetMeta>& meta) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Data, "cannot open price file " + path.string());

  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Schema, path.string() + ": empty file");
  const auto header = split_csv_line(line);
  if (header.empty() || trim(header[0]) != "date")
    fail(ErrorKind::Schema, where(path, 1) + ": first column must be 'date'");

  std::map<std::string, std::size_t> meta_index;
  for (std::size_t i = 0; i < meta.size(); ++i) meta_index[meta[i].asset_id] = i;

  // column in file -> asset index in meta
  std::vector<std::size_t> column_asset;
  std::set<std::size_t> covered;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const auto id = trim(header[c]);
    const auto it = meta_index.find(id);
    if (it == meta_index.end()) fail(ErrorKind::Schema, where(path, 1) + ": unknown column '" + id + "'");
    if (!covered.insert(it->second).second)
      fail(ErrorKind::Schema, where(path, 1) + ": duplicate column '" + id + "'");
    column_asset.push_back(it->second);
  }
  for (const auto& m : meta)
    if (!covered.count(meta_index[m.asset_id]))
      fail(ErrorKind::Schema, path.string() + ": missing column for asset '" + m.asset_id + "'");

  std::vector<std::pair<Date, std::vector<double>>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      fail(ErrorKind::Parse, where(path, lineno) + ": expected " + std::to_string(header.size()) +
                                 " fields, got " + std::to_string(cells.size()));
    const auto date = parse_date(trim(cells[0]));
    if (!date) fail(ErrorKind::Parse, where(path, lineno) + ": bad date '" + cells[0] + "'");
    std::vector<double> values(meta.size(), kMissing);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const auto text = trim(cells[c]);
      if (text.empty() || text == "NA" || text == "NaN" || text == "nan") continue;
      double v = 0.0;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
      if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        fail(ErrorKind::Parse, where(path, lineno) + ": bad number '" + text + "'");
      if (!(v > 0.0) || !std::isfinite(v))
        fail(ErrorKind::Data, where(path, lineno) + ": non-positive price for " + meta[column_asset[c - 1]].asset_id);
      values[column_asset[c - 1]] = v;
    }
    rows.emplace_back(*date, std::move(values));
  }

  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].first == rows[i - 1].first)
      fail(ErrorKind::Schema, path.string() + ": duplicate date " + format_date(rows[i].first));

  std::vector<Date> dates;
  RowMatrix prices(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(meta.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    dates.push_back(rows[r].first);
    for (std::size_t c = 0; c < meta.size(); ++c)
      prices(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r].second[c];
  }
  return PricePanel(std::move(dates), std::move(prices), meta);
}

void write_price_csv(const std::filesystem::path& path, const PricePanel& panel) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Data, "cannot write " + path.string());
  out << "date";
  for (const auto& m : panel.meta()) out << ',' << m.asset_id;
  out << '\n';
  for (std::size_t r = 0; r < panel.dates().size(); ++r) {
    out << format_date(panel.dates()[r]);
    for (std::size_t c = 0; c < panel.n_assets(); ++c) {
      out << ',';
      if (panel.has_price(r, c))
        out << format_double(panel.prices()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
    out << '\n';
  }
}

std::vector<Date> trading_calendar(const PricePanel& panel) {
  std::vector<std::size_t> industry;
  for (std::size_t c = 0; c < panel.n_assets(); ++c)
    if (panel.meta()[c].category == Category::Industry) industry.push_back(c);
  if (industry.empty()) fail(ErrorKind::Schema, "no industry assets to derive a trading calendar from");
  std::vector<Date> calendar;
  for (std::size_t r = 0; r < panel.dates().size(); ++r) {
    const bool all = std::all_of(industry.begin(), industry.end(),
                                 [&](std::size_t c) { return panel.has_price(r, c); });
    if (all) calendar.push_back(panel.dates()[r]);
  }
  return calendar;
}

ReturnPanel align_and_compute_returns(const PricePanel& panel, const std::vector<Date>& calendar) {
  if (calendar.size() < 2) fail(ErrorKind::Data, "trading calendar needs at least two dates");
  const auto& dates = panel.dates();
  const std::size_t n = panel.n_assets();

  // Price of each asset on each calendar date, forward-filling crypto gaps.
  RowMatrix aligned(static_cast<Eigen::Index>(calendar.size()), static_cast<Eigen::Index>(n));
  std::vector<double> last_seen(n, kMissing);
  std::size_t row = 0;
  for (std::size_t k = 0; k < calendar.size(); ++k) {
    if (k > 0 && !(calendar[k - 1] < calendar[k]))
      fail(ErrorKind::Data, "trading calendar not strictly increasing at " + format_date(calendar[k]));
    for (; row < dates.size() && dates[row] <= calendar[k]; ++row)
      for (std::size_t c = 0; c < n; ++c)
        if (panel.has_price(row, c)) last_seen[c] = panel.prices()(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c));
    const bool exact = row > 0 && dates[row - 1] == calendar[k];
    for (std::size_t c = 0; c < n; ++c) {
      const auto& m = panel.meta()[c];
      const bool present = exact && panel.has_price(row - 1, c);
      if (!present) {
        if (m.category == Category::Industry || std::isnan(last_seen[c]))
          fail(ErrorKind::Data, "missing price for " + m.asset_id + " on " + format_date(calendar[k]));
        spdlog::warn("forward-filling {} on {}", m.asset_id, format_date(calendar[k]));
      }
      aligned(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = last_seen[c];
    }
  }

  RowMatrix returns(static_cast<Eigen::Index>(calendar.size() - 1), static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 1; k < aligned.rows(); ++k)
    for (Eigen::Index c = 0; c < aligned.cols(); ++c)
      returns(k - 1, c) = aligned(k, c) / aligned(k - 1, c) - 1.0;

  return ReturnPanel(calendar.front(), std::vector<Date>(calendar.begin() + 1, calendar.end()),
                     std::move(returns), panel.meta());
}

}  // namespace riskalloc
