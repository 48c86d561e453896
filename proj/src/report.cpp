#include "riskalloc/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

#include "riskalloc/error.hpp"

namespace riskalloc {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Data, "cannot write " + path.string());
  return out;
}

nlohmann::json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  // Round to the same 6 significant digits as the CSV artifacts.
  return std::stod(format_number(v));
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  if (std::string(buf) == "-0") return "0";
  return buf;
}

void write_summary_json(const std::filesystem::path& path, const std::string& name, const BacktestResult& result) {
  const Summary& s = result.summary;
  nlohmann::ordered_json j;
  j["name"] = name;
  j["periods"] = s.periods;
  j["first_decision"] = result.decision_dates.empty() ? "" : format_date(result.decision_dates.front());
  j["last_realization"] = result.realization_dates.empty() ? "" : format_date(result.realization_dates.back());
  j["return_pct"] = number_or_null(s.annual_return);
  j["volatility_pct"] = number_or_null(s.annual_volatility);
  j["sharpe"] = number_or_null(s.sharpe);
  j["drawdown_pct"] = number_or_null(s.max_drawdown);
  j["average_cash"] = number_or_null(s.average_cash);
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_weights_csv(const std::filesystem::path& path, const BacktestResult& result) {
  auto out = open_out(path);
  out << "date";
  for (const auto& id : result.asset_ids) out << ',' << id;
  out << ",cash,exposure\n";
  for (std::size_t t = 0; t < result.decision_dates.size(); ++t) {
    out << format_date(result.decision_dates[t]);
    const auto row = result.weights.row(static_cast<Eigen::Index>(t));
    for (Eigen::Index i = 0; i < row.size(); ++i) out << ',' << format_number(row(i));
    out << ',' << format_number(result.cash[t]) << ',' << format_number(row.sum()) << '\n';
  }
}

void write_values_csv(const std::filesystem::path& path, const BacktestResult& result) {
  auto out = open_out(path);
  out << "date,portfolio_return,value\n";
  if (result.decision_dates.empty()) return;
  out << format_date(result.decision_dates.front()) << ",0,1\n";
  for (std::size_t t = 0; t < result.returns.size(); ++t)
    out << format_date(result.realization_dates[t]) << ',' << format_number(result.returns[t]) << ','
        << format_number(result.values[t + 1]) << '\n';
}

void write_annual_csv(const std::filesystem::path& path, const BacktestResult& result) {
  auto out = open_out(path);
  out << "year,return_pct,volatility_pct,sharpe,drawdown_pct,average_cash\n";
  for (const auto& row : result.annual) {
    const auto& m = row.metrics;
    out << row.year << ',' << format_number(m.annual_return) << ',' << format_number(m.annual_volatility) << ','
        << format_number(m.sharpe) << ',' << format_number(m.max_drawdown) << ',' << format_number(m.average_cash)
        << '\n';
  }
}

void write_shapley_csv(const std::filesystem::path& path, const ShapleyReport& report) {
  auto out = open_out(path);
  out << "metric";
  for (const auto& p : report.players) out << ',' << p;
  out << ",Total\n";
  for (std::size_t k = 0; k < report.metric_names.size(); ++k) {
    out << report.metric_names[k];
    for (std::size_t i = 0; i < report.players.size(); ++i) out << ',' << format_number(report.phi[i][k]);
    out << ',' << format_number(report.totals[k]) << '\n';
  }
}

void write_compare_csv(const std::filesystem::path& values_path, const std::filesystem::path& summary_path,
                       const Comparison& c) {
  {
    auto out = open_out(values_path);
    out << "date";
    for (const auto& n : c.names) out << ',' << n;
    out << '\n';
    for (std::size_t t = 0; t < c.dates.size(); ++t) {
      out << format_date(c.dates[t]);
      for (const auto& path : c.values) out << ',' << format_number(path[t]);
      out << '\n';
    }
  }
  auto out = open_out(summary_path);
  out << "metric";
  for (const auto& n : c.names) out << ',' << n;
  out << '\n';
  const auto row = [&](const char* label, auto field) {
    out << label;
    for (const auto& s : c.summaries) out << ',' << format_number(field(s));
    out << '\n';
  };
  row("return_pct", [](const Summary& s) { return s.annual_return; });
  row("volatility_pct", [](const Summary& s) { return s.annual_volatility; });
  row("sharpe", [](const Summary& s) { return s.sharpe; });
  row("drawdown_pct", [](const Summary& s) { return s.max_drawdown; });
  row("average_cash", [](const Summary& s) { return s.average_cash; });
}

void print_summary_table(std::ostream& out, const std::vector<std::string>& names,
                         const std::vector<Summary>& summaries) {
  const auto flags = out.flags();
  out << std::left << std::setw(18) << "Metric";
  for (const auto& n : names) out << std::right << std::setw(16) << n;
  out << '\n';
  const auto row = [&](const char* label, int precision, auto field) {
    out << std::left << std::setw(18) << label << std::fixed << std::setprecision(precision);
    for (const auto& s : summaries) out << std::right << std::setw(16) << field(s);
    out << '\n';
  };
  row("Return (%)", 1, [](const Summary& s) { return s.annual_return; });
  row("Volatility (%)", 1, [](const Summary& s) { return s.annual_volatility; });
  row("Sharpe", 2, [](const Summary& s) { return s.sharpe; });
  row("Drawdown (%)", 1, [](const Summary& s) { return s.max_drawdown; });
  row("Cash (avg, %)", 1, [](const Summary& s) { return 100.0 * s.average_cash; });
  out.flags(flags);
}

void print_shapley_table(std::ostream& out, const ShapleyReport& report) {
  const auto flags = out.flags();
  out << std::left << std::setw(18) << "";
  for (const auto& p : report.players) out << std::right << std::setw(10) << p;
  out << std::right << std::setw(10) << "Total" << '\n';
  for (std::size_t k = 0; k < report.metric_names.size(); ++k) {
    const int precision = report.metric_names[k] == "Sharpe" ? 2 : 1;
    out << std::left << std::setw(18) << report.metric_names[k] << std::fixed << std::setprecision(precision);
    for (std::size_t i = 0; i < report.players.size(); ++i) out << std::right << std::setw(10) << report.phi[i][k];
    out << std::right << std::setw(10) << report.totals[k] << '\n';
  }
  out.flags(flags);
}

}  // namespace riskalloc
