#pragma once

// Output artifacts. CSV numbers are written with 6 significant digits; NaN is
// written as "nan" in CSV and null in JSON.
//
//   summary.json  {"name", "periods", "first_decision", "last_realization",
//                  "return_pct", "volatility_pct", "sharpe", "drawdown_pct",
//                  "average_cash"}
//   weights.csv   date,<asset>...,cash,exposure       (one row per decision date)
//   values.csv    date,portfolio_return,value         (first row: start, value 1)
//   annual.csv    year,return_pct,volatility_pct,sharpe,drawdown_pct,average_cash
//   shapley.csv   metric,<player>...,Total
//   compare.csv   date,<run>...                       (values normalized to 1)
//   compare_summary.csv  metric,<run>...

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "riskalloc/attribution.hpp"
#include "riskalloc/backtest.hpp"

namespace riskalloc {

std::string format_number(double v);

void write_summary_json(const std::filesystem::path& path, const std::string& name, const BacktestResult& result);
void write_weights_csv(const std::filesystem::path& path, const BacktestResult& result);
void write_values_csv(const std::filesystem::path& path, const BacktestResult& result);
void write_annual_csv(const std::filesystem::path& path, const BacktestResult& result);
void write_shapley_csv(const std::filesystem::path& path, const ShapleyReport& report);

struct Comparison {
  std::vector<std::string> names;
  std::vector<Date> dates;                  // common value-path dates
  std::vector<std::vector<double>> values;  // [run][date], 1 at dates.front()
  std::vector<Summary> summaries;           // over the common window
};

void write_compare_csv(const std::filesystem::path& values_path, const std::filesystem::path& summary_path,
                       const Comparison& comparison);

/// Metric-by-portfolio table with one column per run.
void print_summary_table(std::ostream& out, const std::vector<std::string>& names,
                         const std::vector<Summary>& summaries);

void print_shapley_table(std::ostream& out, const ShapleyReport& report);

}  // namespace riskalloc
