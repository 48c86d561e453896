// riskalloc command-line front end.
//
//   riskalloc backtest   --config C [--data-dir D] [--out-dir O]
//   riskalloc attribute  --config C [--data-dir D] [--out-dir O] [--jobs N]
//   riskalloc compare    --config C1 --config C2 ... [--data-dir D] [--out-dir O]
//   riskalloc covariance --config C [--data-dir D] [--out-dir O]
//   riskalloc synth      [--out-dir O] [--seed S]
//
// Exit status: 0 success, 2 configuration error, 3 data error, 4 numerical failure.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "riskalloc/error.hpp"
#include "riskalloc/experiment.hpp"
#include "riskalloc/manifest.hpp"

namespace fs = std::filesystem;
using namespace riskalloc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
      return kExitConfig;
    case ErrorKind::Parse:
    case ErrorKind::Schema:
    case ErrorKind::Data:
      return kExitData;
    case ErrorKind::Parameter:
    case ErrorKind::Input:
    case ErrorKind::Model:
    case ErrorKind::Convergence:
      return kExitNumeric;
  }
  return kExitNumeric;
}

struct Options {
  std::vector<std::string> configs;
  std::string data_dir;
  std::string out_dir;
  std::uint64_t seed = FixtureSpec{}.seed;
  unsigned jobs = 1;
  bool verbose = false;
};

/// Flag value, then environment variable, then default.
fs::path resolve_dir(const std::string& flag, const char* env, const char* fallback) {
  if (!flag.empty()) return flag;
  if (const char* v = std::getenv(env); v && *v) return v;
  return fallback;
}

/// A config's [data] file names are resolved inside the data directory.
fs::path data_dir_for(const Options& o) { return resolve_dir(o.data_dir, "RISKALLOC_DATA_DIR", "data/fixture"); }
fs::path out_dir_for(const Options& o) { return resolve_dir(o.out_dir, "RISKALLOC_OUT_DIR", "out"); }

ExperimentConfig load_config_or_fail(const std::string& path) {
  if (!fs::exists(path)) fail(ErrorKind::Config, "config file not found: " + path);
  return load_config(path);
}

RunManifest start_manifest(const std::string& command, const std::vector<std::string>& configs,
                           const std::vector<fs::path>& data_files) {
  RunManifest m;
  m.command = command;
  m.timestamp = utc_timestamp();
  for (const auto& c : configs) m.config_checksums.emplace_back(c, sha256_file(c));
  for (const auto& d : data_files) m.data_checksums.emplace_back(d.string(), sha256_file(d));
  return m;
}

void finish_manifest(const fs::path& out, RunManifest& m, const std::vector<std::string>& files) {
  for (const auto& f : files) m.outputs.push_back((out / f).string());
  write_manifest(out / "manifest.json", m);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_backtest(const Options& o) {
  const auto config = load_config_or_fail(o.configs.at(0));
  const auto data = load_data(data_dir_for(o), config.data);
  const auto out = out_dir_for(o);
  fs::create_directories(out);
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = run_experiment(data.panel, config.backtest);
  spdlog::info("backtest {}: {} periods in {:.2f} s", config.name, result.summary.periods, seconds_since(t0));

  auto manifest = start_manifest("backtest", o.configs, data.files);
  write_summary_json(out / "summary.json", config.name, result);
  write_weights_csv(out / "weights.csv", result);
  write_values_csv(out / "values.csv", result);
  write_annual_csv(out / "annual.csv", result);
  finish_manifest(out, manifest, {"summary.json", "weights.csv", "values.csv", "annual.csv"});
  print_summary_table(std::cout, {config.name}, {result.summary});
  return 0;
}

int cmd_attribute(const Options& o) {
  const auto config = load_config_or_fail(o.configs.at(0));
  const auto data = load_data(data_dir_for(o), config.data);
  const auto out = out_dir_for(o);
  fs::create_directories(out);
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = run_attribution(data.panel, config, o.jobs);
  spdlog::info("attribution {}: {} coalitions in {:.2f} s", config.name, 1u << report.players.size(),
               seconds_since(t0));

  auto manifest = start_manifest("attribute", o.configs, data.files);
  write_shapley_csv(out / "shapley.csv", report);
  finish_manifest(out, manifest, {"shapley.csv"});
  print_shapley_table(std::cout, report);
  return 0;
}

int cmd_compare(const Options& o) {
  if (o.configs.size() < 2) fail(ErrorKind::Config, "compare needs at least two --config files");
  std::vector<std::string> names;
  std::vector<BacktestResult> results;
  std::vector<fs::path> data_files;
  double annualization = 0.0;
  for (const auto& path : o.configs) {
    const auto config = load_config_or_fail(path);
    const auto data = load_data(data_dir_for(o), config.data);
    for (const auto& f : data.files)
      if (std::find(data_files.begin(), data_files.end(), f) == data_files.end()) data_files.push_back(f);
    if (annualization != 0.0 && annualization != config.backtest.annualization)
      fail(ErrorKind::Config, "compared configs use different annualization factors");
    annualization = config.backtest.annualization;
    names.push_back(config.name);
    results.push_back(run_experiment(data.panel, config.backtest));
  }
  const auto comparison = compare_results(names, results, annualization);
  const auto out = out_dir_for(o);
  fs::create_directories(out);
  auto manifest = start_manifest("compare", o.configs, data_files);
  write_compare_csv(out / "compare.csv", out / "compare_summary.csv", comparison);
  finish_manifest(out, manifest, {"compare.csv", "compare_summary.csv"});
  print_summary_table(std::cout, comparison.names, comparison.summaries);
  return 0;
}

int cmd_covariance(const Options& o) {
  const auto config = load_config_or_fail(o.configs.at(0));
  const auto data = load_data(data_dir_for(o), config.data);
  const auto out = out_dir_for(o);
  const auto series = iewma_covariance(data.panel.select(config.backtest.strategy.universe),
                                       config.backtest.strategy.iewma);
  fs::create_directories(out / "covariance");
  auto manifest = start_manifest("covariance", o.configs, data.files);
  write_covariance_series(out / "covariance", series);
  finish_manifest(out, manifest, {"covariance/index.csv"});
  std::cout << "wrote " << series.size() << " covariance estimates to " << (out / "covariance").string() << '\n';
  return 0;
}

int cmd_synth(const Options& o) {
  const auto out = resolve_dir(o.out_dir, "RISKALLOC_OUT_DIR", "data/fixture");
  fs::create_directories(out);
  FixtureSpec spec;
  spec.seed = o.seed;
  const auto prices = synthetic_price_fixture(spec);
  write_asset_meta(out / "assets.csv", prices.meta());
  write_price_csv(out / "prices.csv", prices);
  std::cout << "wrote " << prices.dates().size() << " dates x " << prices.n_assets() << " assets to "
            << out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained risk allocation backtests and Shapley attribution"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App* sub, bool multi_config) {
    if (multi_config)
      sub->add_option("--config", o.configs, "Experiment config (repeat for each run)")->required();
    else
      sub->add_option("--config", o.configs, "Experiment config")->required()->expected(1);
    sub->add_option("--data-dir", o.data_dir, "Directory with prices/assets CSVs (env RISKALLOC_DATA_DIR)");
    sub->add_option("--out-dir", o.out_dir, "Output directory (env RISKALLOC_OUT_DIR)");
    sub->add_option("--jobs", o.jobs, "Worker threads for coalition backtests")->check(CLI::Range(1u, 256u));
    sub->add_flag("--verbose,-v", o.verbose, "Debug logging");
  };
  auto* backtest = app.add_subcommand("backtest", "Run one configured backtest");
  add_common(backtest, false);
  auto* attribute = app.add_subcommand("attribute", "Shapley attribution over the configured players");
  add_common(attribute, false);
  auto* compare = app.add_subcommand("compare", "Align several backtests on common dates");
  add_common(compare, true);
  auto* covariance = app.add_subcommand("covariance", "Write the IEWMA covariance series");
  add_common(covariance, false);
  auto* synth = app.add_subcommand("synth", "Write the seeded synthetic price fixture");
  synth->add_option("--out-dir", o.out_dir, "Output directory (env RISKALLOC_OUT_DIR)");
  synth->add_option("--seed", o.seed, "Random seed");
  synth->add_flag("--verbose,-v", o.verbose, "Debug logging");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  auto logger = spdlog::stderr_color_mt("riskalloc");
  logger->set_pattern("%^%l%$: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(o.verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*backtest) return cmd_backtest(o);
    if (*attribute) return cmd_attribute(o);
    if (*compare) return cmd_compare(o);
    if (*covariance) return cmd_covariance(o);
    return cmd_synth(o);
  } catch (const Error& e) {
    std::cerr << "riskalloc: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "riskalloc: data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "riskalloc: " << e.what() << '\n';
    return kExitNumeric;
  }
}
