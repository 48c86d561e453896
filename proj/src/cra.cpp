#include "riskalloc/cra.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "riskalloc/error.hpp"

namespace riskalloc {

RiskAllocation::RiskAllocation(Eigen::VectorXd rho) : rho_(std::move(rho)) {
  if (rho_.size() == 0) fail(ErrorKind::Parameter, "risk allocation is empty");
  for (Eigen::Index i = 0; i < rho_.size(); ++i)
    if (!(rho_(i) > 0.0) || !std::isfinite(rho_(i)))
      fail(ErrorKind::Parameter, "risk allocation entries must be positive; drop assets with zero allocation");
  if (std::abs(rho_.sum() - 1.0) > 1e-12) fail(ErrorKind::Parameter, "risk allocation must sum to one");
}

RiskAllocation RiskAllocation::parity(Eigen::Index n) {
  return RiskAllocation(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

void ConstraintSet::validate(Eigen::Index n) const {
  if (!(sigma_daily > 0.0)) fail(ErrorKind::Parameter, "risk limit must be positive");
  if (F.rows() != g.size()) fail(ErrorKind::Parameter, "F and g disagree on the number of caps");
  if (F.rows() > 0 && F.cols() != n) fail(ErrorKind::Parameter, "F has the wrong number of columns");
  for (Eigen::Index i = 0; i < F.rows(); ++i) {
    if (!(g(i) > 0.0) || !std::isfinite(g(i))) fail(ErrorKind::Parameter, "cap bounds g must be positive");
    if ((F.row(i).array() < 0.0).any() || !F.row(i).allFinite())
      fail(ErrorKind::Parameter, "cap matrix F must be nonnegative");
    if (!(F.row(i).array() > 0.0).any()) fail(ErrorKind::Parameter, "cap matrix F has a zero row");
  }
}

ConstraintSet ConstraintSet::risk_only(Eigen::Index n, double sigma_daily) {
  return ConstraintSet{sigma_daily, Eigen::MatrixXd(0, n), Eigen::VectorXd(0)};
}

double daily_risk_limit(double annual_limit, double trading_days_per_year) {
  if (!(trading_days_per_year > 0.0)) fail(ErrorKind::Parameter, "annualization factor must be positive");
  return annual_limit / std::sqrt(trading_days_per_year);
}

PortfolioWeights PortfolioWeights::all_cash(Eigen::Index n) {
  return PortfolioWeights{Eigen::VectorXd::Zero(n), 1.0};
}

namespace {

double objective(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& rho, const Eigen::VectorXd& x) {
  return 0.5 * x.dot(sigma * x) - rho.dot(x.array().log().matrix());
}

}  // namespace

SolverResult solve_risk_allocation(const Eigen::MatrixXd& sigma, const RiskAllocation& allocation,
                                   const SolverOptions& options) {
  const Eigen::Index n = sigma.rows();
  const Eigen::VectorXd& rho = allocation.rho();
  if (sigma.cols() != n || rho.size() != n) fail(ErrorKind::Input, "covariance and risk allocation sizes differ");
  if (!(options.tolerance > 0.0)) fail(ErrorKind::Input, "solver tolerance must be positive");
  if (!sigma.allFinite()) fail(ErrorKind::Model, "covariance has non-finite entries");
  if (!sigma.isApprox(sigma.transpose(), 1e-12)) fail(ErrorKind::Model, "covariance is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> sigma_llt(sigma);
  if (sigma_llt.info() != Eigen::Success) fail(ErrorKind::Model, "covariance is not positive definite");

  Eigen::VectorXd x = rho.array().sqrt() / sigma.diagonal().array().sqrt();
  SolverResult result;
  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd sx = sigma * x;
    const Eigen::VectorXd grad = sx - (rho.array() / x.array()).matrix();
    result.residual = grad.lpNorm<Eigen::Infinity>();
    const double scaled = (x.array() * grad.array()).abs().maxCoeff();
    if (result.residual <= options.tolerance * std::max(1.0, sx.lpNorm<Eigen::Infinity>()) &&
        scaled <= options.tolerance) {
      result.iterations = iter;
      break;
    }
    if (iter >= options.max_iterations) {
      std::ostringstream msg;
      msg << "risk allocation solver hit " << options.max_iterations << " iterations, residual "
          << result.residual;
      fail(ErrorKind::Convergence, msg.str());
    }

    Eigen::MatrixXd hessian = sigma;
    hessian.diagonal().array() += rho.array() / x.array().square();
    Eigen::LLT<Eigen::MatrixXd> llt(hessian);
    if (llt.info() != Eigen::Success) fail(ErrorKind::Model, "Newton system is not positive definite");
    const Eigen::VectorXd dx = -llt.solve(grad);

    double step = 1.0;
    while (((x + step * dx).array() <= 0.0).any()) step *= 0.5;
    const double f0 = objective(sigma, rho, x);
    const double slope = grad.dot(dx);
    // Near the optimum the predicted decrease falls below the rounding error
    // of f itself; allow that much slack so full Newton steps are accepted.
    const double noise = 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(f0) + 1.0);
    while (step > 1e-16) {
      const Eigen::VectorXd trial = x + step * dx;
      if (objective(sigma, rho, trial) <= f0 + 0.25 * step * slope + noise) break;
      step *= 0.5;
    }
    x += step * dx;
  }
  result.x = std::move(x);
  spdlog::debug("risk allocation solve: iterations={} residual={:.3e}", result.iterations, result.residual);
  return result;
}

double compute_scaling(const Eigen::VectorXd& x_star, double risk_of_xstar, const ConstraintSet& constraints) {
  if (!(risk_of_xstar > 0.0) || !std::isfinite(risk_of_xstar))
    fail(ErrorKind::Input, "risk of x* must be positive and finite");
  if (!x_star.allFinite() || (x_star.array() <= 0.0).any()) fail(ErrorKind::Input, "x* must be positive");
  constraints.validate(x_star.size());

  double alpha = std::min(1.0 / x_star.sum(), constraints.sigma_daily / risk_of_xstar);
  if (constraints.F.rows() > 0) {
    const Eigen::VectorXd fx = constraints.F * x_star;
    for (Eigen::Index i = 0; i < fx.size(); ++i)
      if (fx(i) > 0.0) alpha = std::min(alpha, constraints.g(i) / fx(i));
  }
  return alpha;
}

PortfolioWeights scale_to_constraints(const Eigen::VectorXd& x_star, double risk_of_xstar,
                                      const ConstraintSet& constraints) {
  const double alpha = compute_scaling(x_star, risk_of_xstar, constraints);
  PortfolioWeights out;
  out.w = alpha * x_star;
  out.cash = std::max(0.0, 1.0 - out.w.sum());
  return out;
}

PortfolioWeights cra_portfolio(const Eigen::MatrixXd& sigma, const RiskAllocation& rho,
                               const ConstraintSet& constraints, std::optional<double> risk_override,
                               const SolverOptions& options) {
  const SolverResult solved = solve_risk_allocation(sigma, rho, options);
  const double risk = risk_override ? *risk_override : std::sqrt(solved.x.dot(sigma * solved.x));
  return scale_to_constraints(solved.x, risk, constraints);
}

}  // namespace riskalloc
