#include "riskalloc/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "riskalloc/error.hpp"

namespace riskalloc {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"experiment", {"name"}},
    {"data", {"prices", "assets"}},
    {"backtest", {"burn_in", "annualization", "start", "end"}},
    {"strategy",
     {"kind", "universe", "risk_limit", "risk_estimate", "rho", "relative_weights", "vol_half_life",
      "corr_half_life"}},
    {"volatility", {"estimator", "half_life", "window", "refit_every", "min_observations"}},
    {"caps", {}},
    {"players", {}},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    auto t = trim(item);
    if (t.empty()) fail(ErrorKind::Config, "empty list item in '" + std::string(text) + "'");
    out.push_back(std::move(t));
  }
  return out;
}

double to_double(const std::string& key, std::string_view text) {
  const auto t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    fail(ErrorKind::Config, key + ": expected a number, got '" + t + "'");
  return v;
}

std::size_t to_size(const std::string& key, std::string_view text) {
  const auto t = trim(text);
  std::size_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    fail(ErrorKind::Config, key + ": expected a nonnegative integer, got '" + t + "'");
  return v;
}

std::vector<double> to_doubles(const std::string& key, std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double(key, item));
  return out;
}

Date to_date(const std::string& key, std::string_view text) {
  const auto d = parse_date(trim(text));
  if (!d) fail(ErrorKind::Config, key + ": expected YYYY-MM-DD, got '" + std::string(text) + "'");
  return *d;
}

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += f(items[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  // '#' comment lines are accepted in addition to the parser's ';' comments.
  std::string filtered;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      const auto t = trim(line);
      if (!t.empty() && t[0] == '#') continue;
      filtered += line;
      filtered += '\n';
    }
  }
  pt::ptree tree;
  try {
    std::istringstream in(filtered);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::Config, std::string("line ") + std::to_string(e.line()) + ": " + e.message());
  }

  for (const auto& [section, body] : tree) {
    const auto it = kSchema.find(section);
    if (it == kSchema.end()) fail(ErrorKind::Config, "unknown section [" + section + "]");
    if (body.empty() && !body.data().empty()) fail(ErrorKind::Config, "key '" + section + "' outside a section");
    if (it->second.empty()) continue;
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) fail(ErrorKind::Config, "unknown key '" + key + "' in [" + section + "]");
  }

  ExperimentConfig c;
  const auto get = [&](const std::string& path) { return tree.get_optional<std::string>(pt::ptree::path_type(path, '/')); };

  if (auto v = get("experiment/name")) c.name = trim(*v);
  if (auto v = get("data/prices")) c.data.prices = trim(*v);
  if (auto v = get("data/assets")) c.data.assets = trim(*v);

  auto& b = c.backtest;
  if (auto v = get("backtest/burn_in")) b.burn_in = to_size("burn_in", *v);
  if (auto v = get("backtest/annualization")) b.annualization = to_double("annualization", *v);
  if (auto v = get("backtest/start")) b.start = to_date("start", *v);
  if (auto v = get("backtest/end")) b.end = to_date("end", *v);
  if (!(b.annualization > 0.0)) fail(ErrorKind::Config, "annualization must be positive");

  auto& s = b.strategy;
  const auto kind = get("strategy/kind");
  if (!kind) fail(ErrorKind::Config, "[strategy] kind is required");
  if (trim(*kind) == "cra") s.kind = StrategyKind::Cra;
  else if (trim(*kind) == "dd9010") s.kind = StrategyKind::Dd9010;
  else fail(ErrorKind::Config, "strategy kind must be cra or dd9010");

  const auto universe = get("strategy/universe");
  if (!universe) fail(ErrorKind::Config, "[strategy] universe is required");
  s.universe = split_list(*universe);
  if (std::set<std::string>(s.universe.begin(), s.universe.end()).size() != s.universe.size())
    fail(ErrorKind::Config, "universe lists an asset twice");

  if (auto v = get("strategy/risk_limit")) s.annual_risk_limit = to_double("risk_limit", *v);
  if (!(s.annual_risk_limit > 0.0)) fail(ErrorKind::Config, "risk_limit must be positive");
  if (auto v = get("strategy/risk_estimate")) {
    const auto t = trim(*v);
    if (t == "realized") s.risk_estimate = RiskEstimate::Realized;
    else if (t == "ex_ante") s.risk_estimate = RiskEstimate::ExAnte;
    else fail(ErrorKind::Config, "risk_estimate must be realized or ex_ante");
  }
  if (auto v = get("strategy/rho")) {
    if (s.kind != StrategyKind::Cra) fail(ErrorKind::Config, "rho applies to cra strategies only");
    s.rho = to_doubles("rho", *v);
    if (s.rho.size() != s.universe.size()) fail(ErrorKind::Config, "rho needs one entry per universe asset");
  }
  if (auto v = get("strategy/relative_weights")) {
    if (s.kind != StrategyKind::Dd9010) fail(ErrorKind::Config, "relative_weights apply to dd9010 strategies only");
    s.relative_weights = to_doubles("relative_weights", *v);
    if (s.relative_weights.size() != s.universe.size())
      fail(ErrorKind::Config, "relative_weights needs one entry per universe asset");
  }
  if (auto v = get("strategy/vol_half_life")) s.iewma.vol_half_life = to_double("vol_half_life", *v);
  if (auto v = get("strategy/corr_half_life")) s.iewma.corr_half_life = to_double("corr_half_life", *v);
  if (!(s.iewma.vol_half_life > 0.0) || !(s.iewma.corr_half_life > 0.0))
    fail(ErrorKind::Config, "half-lives must be positive");

  if (auto v = get("volatility/estimator")) {
    const auto t = trim(*v);
    if (t == "ewma") s.vol.kind = VolEstimatorKind::Ewma;
    else if (t == "garch") s.vol.kind = VolEstimatorKind::Garch;
    else fail(ErrorKind::Config, "volatility estimator must be ewma or garch");
  }
  if (auto v = get("volatility/half_life")) s.vol.half_life = to_double("half_life", *v);
  if (auto v = get("volatility/window")) s.vol.window = to_size("window", *v);
  if (auto v = get("volatility/refit_every")) s.vol.refit_every = to_size("refit_every", *v);
  if (auto v = get("volatility/min_observations")) s.vol.min_observations = to_size("min_observations", *v);
  if (!(s.vol.half_life > 0.0)) fail(ErrorKind::Config, "volatility half_life must be positive");
  if (s.vol.window < 50) fail(ErrorKind::Config, "volatility window must be at least 50");
  if (s.vol.refit_every == 0) fail(ErrorKind::Config, "refit_every must be at least 1");

  if (auto caps = tree.get_child_optional("caps")) {
    for (const auto& [name, value] : *caps) {
      const std::string text = value.data();
      const auto le = text.find("<=");
      if (le == std::string::npos) fail(ErrorKind::Config, "cap '" + name + "' must read '<assets> <= <limit>'");
      WeightCap cap{name, split_list(text.substr(0, le)), to_double("cap " + name, text.substr(le + 2))};
      if (!(cap.limit > 0.0)) fail(ErrorKind::Config, "cap '" + name + "' limit must be positive");
      s.caps.push_back(std::move(cap));
    }
  }
  if (auto players = tree.get_child_optional("players")) {
    for (const auto& [name, value] : *players) c.players.push_back(Player{name, split_list(value.data())});
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string serialize_config(const ExperimentConfig& c) {
  const auto& b = c.backtest;
  const auto& s = b.strategy;
  const auto id = [](const std::string& x) { return x; };
  std::ostringstream out;
  out << "[experiment]\nname = " << c.name << "\n\n";
  out << "[data]\nprices = " << c.data.prices << "\nassets = " << c.data.assets << "\n\n";
  out << "[backtest]\nburn_in = " << b.burn_in << "\nannualization = " << fmt_double(b.annualization) << '\n';
  if (b.start) out << "start = " << format_date(*b.start) << '\n';
  if (b.end) out << "end = " << format_date(*b.end) << '\n';
  out << "\n[strategy]\nkind = " << (s.kind == StrategyKind::Cra ? "cra" : "dd9010") << '\n';
  out << "universe = " << join(s.universe, id) << '\n';
  out << "risk_limit = " << fmt_double(s.annual_risk_limit) << '\n';
  out << "risk_estimate = " << (s.risk_estimate == RiskEstimate::Realized ? "realized" : "ex_ante") << '\n';
  if (!s.rho.empty()) out << "rho = " << join(s.rho, fmt_double) << '\n';
  if (!s.relative_weights.empty()) out << "relative_weights = " << join(s.relative_weights, fmt_double) << '\n';
  out << "vol_half_life = " << fmt_double(s.iewma.vol_half_life) << '\n';
  out << "corr_half_life = " << fmt_double(s.iewma.corr_half_life) << '\n';
  out << "\n[volatility]\nestimator = " << (s.vol.kind == VolEstimatorKind::Ewma ? "ewma" : "garch") << '\n';
  out << "half_life = " << fmt_double(s.vol.half_life) << '\n';
  out << "window = " << s.vol.window << '\n';
  out << "refit_every = " << s.vol.refit_every << '\n';
  out << "min_observations = " << s.vol.min_observations << '\n';
  if (!s.caps.empty()) {
    out << "\n[caps]\n";
    for (const auto& cap : s.caps) out << cap.name << " = " << join(cap.assets, id) << " <= " << fmt_double(cap.limit) << '\n';
  }
  if (!c.players.empty()) {
    out << "\n[players]\n";
    for (const auto& p : c.players) out << p.name << " = " << join(p.assets, id) << '\n';
  }
  return out.str();
}

}  // namespace riskalloc
