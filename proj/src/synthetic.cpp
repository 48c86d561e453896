#include <cmath>
#include <limits>
#include <random>

#include "riskalloc/error.hpp"
#include "riskalloc/marketdata.hpp"

namespace riskalloc {

ReturnPanel synthetic_panel(const SyntheticSpec& spec) {
  const std::size_t n = spec.n_assets;
  if (n == 0) fail(ErrorKind::Parameter, "synthetic panel needs at least one asset");
  if (spec.n_days == 0) fail(ErrorKind::Parameter, "synthetic panel needs at least one day");
  if (spec.daily_vols.size() != n) fail(ErrorKind::Parameter, "one volatility per asset required");
  for (double v : spec.daily_vols)
    if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorKind::Parameter, "volatilities must be nonnegative");

  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (spec.correlation.size() != 0) {
    if (spec.correlation.rows() != static_cast<Eigen::Index>(n) || spec.correlation.cols() != static_cast<Eigen::Index>(n))
      fail(ErrorKind::Parameter, "correlation matrix has wrong shape");
    corr = spec.correlation;
    for (Eigen::Index i = 0; i < corr.rows(); ++i) {
      if (std::abs(corr(i, i) - 1.0) > 1e-12) fail(ErrorKind::Parameter, "correlation diagonal must be 1");
      for (Eigen::Index j = 0; j < i; ++j)
        if (std::abs(corr(i, j) - corr(j, i)) > 1e-12) fail(ErrorKind::Parameter, "correlation must be symmetric");
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(corr);
  if (llt.info() != Eigen::Success) fail(ErrorKind::Parameter, "correlation matrix is not positive definite");
  const Eigen::MatrixXd chol = llt.matrixL();

  std::vector<AssetMeta> meta = spec.meta;
  if (meta.empty())
    for (std::size_t i = 0; i < n; ++i)
      meta.push_back({"A" + std::to_string(i), Category::Industry, "Asset " + std::to_string(i)});
  if (meta.size() != n) fail(ErrorKind::Parameter, "metadata size does not match n_assets");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const Date start = date_from_day_number(0);
  std::vector<Date> dates;
  dates.reserve(spec.n_days);
  RowMatrix returns(static_cast<Eigen::Index>(spec.n_days), static_cast<Eigen::Index>(n));
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (std::size_t t = 0; t < spec.n_days; ++t) {
    dates.push_back(date_from_day_number(static_cast<long>(t) + 1));
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    const Eigen::VectorXd x = chol * z;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = spec.daily_vols[i] * x(static_cast<Eigen::Index>(i));
      if (!(r > -1.0)) fail(ErrorKind::Parameter, "volatility too large: simulated return <= -1");
      returns(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = r;
    }
  }
  return ReturnPanel(start, std::move(dates), std::move(returns), std::move(meta));
}

namespace {

bool is_fixture_holiday(const Date& d) {
  const unsigned m = static_cast<unsigned>(d.month());
  const unsigned day = static_cast<unsigned>(d.day());
  return (m == 1 && day == 1) || (m == 7 && day == 4) || (m == 12 && day == 25);
}

}  // namespace

PricePanel synthetic_price_fixture(const FixtureSpec& spec) {
  if (!(spec.first < spec.last)) fail(ErrorKind::Parameter, "fixture date range is empty");

  const std::vector<AssetMeta> meta = {
      {"Cnsmr", Category::Industry, "Consumer"},
      {"Manuf", Category::Industry, "Manufacturing"},
      {"HiTec", Category::Industry, "Technology"},
      {"Hlth", Category::Industry, "Healthcare"},
      {"BTC", Category::Crypto, "Bitcoin"},
      {"ETH", Category::Crypto, "Ethereum"},
  };
  // Annualized drift and volatility; equities per 252 trading days, crypto
  // per 365 calendar days.
  const double eq_mu[4] = {0.13, 0.10, 0.19, 0.10};
  const double eq_vol[4] = {0.17, 0.18, 0.21, 0.16};
  const double eq_loading = std::sqrt(0.72);
  const double cr_mu[2] = {0.38, 0.42};
  const double cr_vol[2] = {0.56, 0.70};
  const double cr_pair = std::sqrt(0.72);
  const double cr_market = 0.18;

  const Date turbulent_from{std::chrono::year{2020}, std::chrono::February, std::chrono::day{20}};
  const Date turbulent_to{std::chrono::year{2020}, std::chrono::May, std::chrono::day{15}};

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const long d0 = day_number(spec.first);
  const long d1 = day_number(spec.last);
  const std::size_t rows = static_cast<std::size_t>(d1 - d0 + 1);

  RowMatrix prices(static_cast<Eigen::Index>(rows), 6);
  std::vector<Date> dates;
  dates.reserve(rows);
  double level[6] = {100.0, 100.0, 100.0, 100.0, 100.0, 100.0};
  double eq_h = 1.0;  // unit-mean GARCH variance multiplier
  double cr_h = 1.0;
  double eq_shock = 0.0, cr_shock = 0.0;

  for (std::size_t k = 0; k < rows; ++k) {
    const Date d = date_from_day_number(d0 + static_cast<long>(k));
    dates.push_back(d);
    const bool trading = !is_weekend(d) && !is_fixture_holiday(d);
    const bool turbulent = !(d < turbulent_from) && !(turbulent_to < d);
    const double stress = turbulent ? 3.0 : 1.0;

    if (k > 0) {
      const double f = normal(rng);
      cr_h = 0.04 + 0.08 * cr_shock * cr_shock + 0.88 * cr_h;
      const double cr_scale = std::sqrt(cr_h) * (turbulent ? 1.8 : 1.0);
      const double c_common = normal(rng);
      double c_shock_sum = 0.0;
      for (int j = 0; j < 2; ++j) {
        const double e = cr_market * f + cr_pair * c_common +
                         std::sqrt(1.0 - cr_market * cr_market - cr_pair * cr_pair) * normal(rng);
        const double sd = cr_vol[j] / std::sqrt(365.0) * cr_scale;
        const double r = cr_mu[j] / 365.0 + sd * e;
        level[4 + j] *= 1.0 + std::max(r, -0.9);
        c_shock_sum += e;
      }
      cr_shock = c_shock_sum / 2.0;

      if (trading) {
        eq_h = 0.05 + 0.10 * eq_shock * eq_shock + 0.85 * eq_h;
        const double eq_scale = std::sqrt(eq_h) * stress;
        double e_sum = 0.0;
        for (int j = 0; j < 4; ++j) {
          const double e = eq_loading * f + std::sqrt(1.0 - eq_loading * eq_loading) * normal(rng);
          const double sd = eq_vol[j] / std::sqrt(252.0) * eq_scale;
          const double r = eq_mu[j] / 252.0 + sd * e - (turbulent ? 0.004 : 0.0);
          level[j] *= 1.0 + std::max(r, -0.5);
          e_sum += e;
        }
        eq_shock = e_sum / 4.0;
      }
    }

    for (int j = 0; j < 4; ++j)
      prices(static_cast<Eigen::Index>(k), j) = trading ? level[j] : std::numeric_limits<double>::quiet_NaN();
    for (int j = 4; j < 6; ++j) prices(static_cast<Eigen::Index>(k), j) = level[j];
  }
  return PricePanel(std::move(dates), std::move(prices), meta);
}

}  // namespace riskalloc
