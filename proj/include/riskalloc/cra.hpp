#pragma once

// Constrained risk allocation.
//
// The weights satisfying w_i (Sigma w)_i = rho_i w^T Sigma w with w >= 0 form
// the ray {alpha x*}, where x* minimizes (1/2) x^T Sigma x - sum rho_i log x_i
// over x > 0. The CRA portfolio is the point on that ray with the largest
// exposure that still meets the risk limit and the linear caps F w <= g:
//
//   alpha* = min{ 1 / 1^T x*,  sigma / risk(x*),  g_i / (F x*)_i }
//
// risk(x*) is sqrt(x*^T Sigma x*) by default; callers may instead pass a
// realized volatility of the x* return stream.

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace riskalloc {

class RiskAllocation {
 public:
  /// rho must be strictly positive and sum to one (to 1e-12).
  explicit RiskAllocation(Eigen::VectorXd rho);

  /// Risk parity, rho = (1/n) 1.
  static RiskAllocation parity(Eigen::Index n);

  const Eigen::VectorXd& rho() const noexcept { return rho_; }
  Eigen::Index size() const noexcept { return rho_.size(); }

 private:
  Eigen::VectorXd rho_;
};

/// Daily volatility limit plus F w <= g with F >= 0, g > 0 and no zero rows.
struct ConstraintSet {
  double sigma_daily = 0.0;
  Eigen::MatrixXd F;  // m x n, m may be zero
  Eigen::VectorXd g;

  /// Throws a parameter error if the set is malformed for n assets.
  void validate(Eigen::Index n) const;

  static ConstraintSet risk_only(Eigen::Index n, double sigma_daily);
};

/// Annualized volatility limit to a per-trading-day limit: annual / sqrt(D).
double daily_risk_limit(double annual_limit, double trading_days_per_year);

struct PortfolioWeights {
  Eigen::VectorXd w;
  double cash = 1.0;

  double exposure() const { return w.sum(); }
  static PortfolioWeights all_cash(Eigen::Index n);
};

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 100;
};

struct SolverResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;  // ||Sigma x - rho / x||_inf
};

/// Damped Newton on the log-barrier objective. Every iterate stays in the
/// positive orthant.
SolverResult solve_risk_allocation(const Eigen::MatrixXd& sigma, const RiskAllocation& rho,
                                   const SolverOptions& options = {});

double compute_scaling(const Eigen::VectorXd& x_star, double risk_of_xstar,
                       const ConstraintSet& constraints);

PortfolioWeights cra_portfolio(const Eigen::MatrixXd& sigma, const RiskAllocation& rho,
                               const ConstraintSet& constraints,
                               std::optional<double> risk_override = std::nullopt,
                               const SolverOptions& options = {});

/// Same as cra_portfolio, but reuses an already solved x*.
PortfolioWeights scale_to_constraints(const Eigen::VectorXd& x_star, double risk_of_xstar,
                                      const ConstraintSet& constraints);

}  // namespace riskalloc
