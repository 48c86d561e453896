#include <cmath>
#include <limits>

#include "riskalloc/error.hpp"
#include "riskalloc/riskmodels.hpp"

namespace riskalloc {

double decay_from_half_life(double half_life) {
  if (!(half_life > 0.0)) fail(ErrorKind::Parameter, "half-life must be positive");
  return std::exp2(-1.0 / half_life);
}

EwmaEstimator::EwmaEstimator(double half_life)
    : half_life_(half_life), beta_(decay_from_half_life(half_life)) {}

EwmaEstimator EwmaEstimator::update(double observation) const {
  if (!std::isfinite(observation)) fail(ErrorKind::Input, "non-finite EWMA observation");
  EwmaEstimator next = *this;
  next.state_ = beta_ * state_ + (1.0 - beta_) * (observation * observation);
  next.weight_sum_ = beta_ * weight_sum_ + (1.0 - beta_);
  ++next.count_;
  return next;
}

double EwmaEstimator::estimate() const noexcept {
  if (count_ == 0) return std::numeric_limits<double>::quiet_NaN();
  return state_ / weight_sum_;
}

double EwmaEstimator::volatility() const noexcept { return std::sqrt(estimate()); }

}  // namespace riskalloc
