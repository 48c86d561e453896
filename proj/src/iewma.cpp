#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "riskalloc/error.hpp"
#include "riskalloc/kernels.hpp"
#include "riskalloc/riskmodels.hpp"

namespace riskalloc {

namespace {

Eigen::MatrixXd reconstruct(const Eigen::VectorXd& v, const Eigen::MatrixXd& r) {
  const Eigen::Index n = v.size();
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      s(i, j) = v(i) * r(i, j) * v(j);
      s(j, i) = s(i, j);
    }
  return s;
}

}  // namespace

CovarianceSeries::CovarianceSeries(std::vector<Date> dates, std::vector<std::string> asset_ids,
                                   std::vector<Eigen::VectorXd> vols,
                                   std::vector<Eigen::MatrixXd> corrs, std::vector<bool> mature)
    : dates_(std::move(dates)),
      asset_ids_(std::move(asset_ids)),
      vols_(std::move(vols)),
      corrs_(std::move(corrs)),
      mature_(std::move(mature)) {
  if (vols_.size() != dates_.size() || corrs_.size() != dates_.size() || mature_.size() != dates_.size())
    fail(ErrorKind::Schema, "covariance series components have inconsistent lengths");
  sigmas_.reserve(dates_.size());
  for (std::size_t t = 0; t < dates_.size(); ++t) sigmas_.push_back(reconstruct(vols_[t], corrs_[t]));
}

std::size_t CovarianceSeries::first_mature() const noexcept {
  const auto it = std::find(mature_.begin(), mature_.end(), true);
  return static_cast<std::size_t>(it - mature_.begin());
}

CovarianceSeries CovarianceSeries::select(const std::vector<std::size_t>& assets) const {
  const auto k = static_cast<Eigen::Index>(assets.size());
  std::vector<std::string> ids;
  for (auto a : assets) ids.push_back(asset_ids_.at(a));
  std::vector<Eigen::VectorXd> vols;
  std::vector<Eigen::MatrixXd> corrs;
  vols.reserve(size());
  corrs.reserve(size());
  for (std::size_t t = 0; t < size(); ++t) {
    Eigen::VectorXd v(k);
    Eigen::MatrixXd r(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      v(i) = vols_[t](static_cast<Eigen::Index>(assets[i]));
      for (Eigen::Index j = 0; j < k; ++j)
        r(i, j) = corrs_[t](static_cast<Eigen::Index>(assets[i]), static_cast<Eigen::Index>(assets[j]));
    }
    vols.push_back(std::move(v));
    corrs.push_back(std::move(r));
  }
  return CovarianceSeries(dates_, std::move(ids), std::move(vols), std::move(corrs), mature_);
}

CovarianceSeries iewma_covariance(const ReturnPanel& panel, const IewmaOptions& options) {
  const std::size_t n = panel.n_assets();
  const std::size_t dates = panel.n_dates();
  if (dates < 2) fail(ErrorKind::Input, "IEWMA needs at least two dates");
  if (n == 0) fail(ErrorKind::Input, "IEWMA needs at least one asset");
  const double vol_beta = decay_from_half_life(options.vol_half_life);
  const double corr_beta = decay_from_half_life(options.corr_half_life);

  std::vector<double> sq(n), var_state(n, 0.0), z(n), outer_state(n * n, 0.0);
  double vol_weight = 0.0, corr_weight = 0.0;

  std::vector<Eigen::VectorXd> vols;
  std::vector<Eigen::MatrixXd> corrs;
  std::vector<bool> mature;
  vols.reserve(dates);
  corrs.reserve(dates);
  mature.reserve(dates);

  const auto& returns = panel.returns();
  for (std::size_t t = 0; t < dates; ++t) {
    const double* row = returns.row(static_cast<Eigen::Index>(t)).data();
    for (std::size_t i = 0; i < n; ++i) sq[i] = row[i] * row[i];
    kernels::ewma_blend(var_state, sq, vol_beta);
    vol_weight = vol_beta * vol_weight + (1.0 - vol_beta);

    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      v(static_cast<Eigen::Index>(i)) = std::sqrt(var_state[i] / vol_weight);
      if (!(v(static_cast<Eigen::Index>(i)) > 0.0))
        fail(ErrorKind::Model, "zero volatility estimate for " + panel.meta()[i].asset_id + " on " +
                                   format_date(panel.dates()[t]) + "; cannot standardize");
      z[i] = row[i] / v(static_cast<Eigen::Index>(i));
    }
    kernels::rank1_ewma(outer_state, z, corr_beta);
    corr_weight = corr_beta * corr_weight + (1.0 - corr_beta);

    // Unit-diagonal normalization; the weight-sum normalization cancels here.
    Eigen::MatrixXd r(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double denom = std::sqrt(outer_state[i * n + i] * outer_state[j * n + j]);
        const double c = std::clamp(outer_state[i * n + j] / denom, -1.0, 1.0);
        r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
        r(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
      }
    }
    vols.push_back(std::move(v));
    corrs.push_back(std::move(r));
    mature.push_back(vol_weight > kEwmaMatureWeight && corr_weight > kEwmaMatureWeight);
  }

  std::vector<std::string> ids;
  for (const auto& m : panel.meta()) ids.push_back(m.asset_id);
  return CovarianceSeries(panel.dates(), std::move(ids), std::move(vols), std::move(corrs), std::move(mature));
}

void write_covariance_series(const std::filesystem::path& dir, const CovarianceSeries& series) {
  std::filesystem::create_directories(dir);
  const auto write_matrix = [&](const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Data, "cannot write " + path.string());
    out << std::setprecision(6);
    out << "asset";
    for (const auto& id : series.asset_ids()) out << ',' << id;
    out << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      out << series.asset_ids()[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << m(i, j);
      out << '\n';
    }
  };

  std::ofstream index(dir / "index.csv");
  if (!index) fail(ErrorKind::Data, "cannot write " + (dir / "index.csv").string());
  index << std::setprecision(6) << "date,mature";
  for (const auto& id : series.asset_ids()) index << ",vol_" << id;
  index << ",covariance_file,correlation_file\n";
  for (std::size_t t = 0; t < series.size(); ++t) {
    const auto d = format_date(series.dates()[t]);
    const auto cov_name = "cov_" + d + ".csv";
    const auto corr_name = "corr_" + d + ".csv";
    write_matrix(dir / cov_name, series.sigma(t));
    write_matrix(dir / corr_name, series.corr(t));
    index << d << ',' << (series.mature(t) ? 1 : 0);
    for (Eigen::Index i = 0; i < series.vols(t).size(); ++i) index << ',' << series.vols(t)(i);
    index << ',' << cov_name << ',' << corr_name << '\n';
  }
}

}  // namespace riskalloc
