#ifndef BMC_LOGSPACE_HPP
#define BMC_LOGSPACE_HPP

#include <Eigen/Core>
#include <cmath>
#include <limits>

namespace bmc {

/// log(sum(exp(v))) with the maximum shifted out. Returns -inf when every
/// entry is -inf (or the expression is empty).
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (v.size() == 0) return -std::numeric_limits<Scalar>::infinity();
  const Scalar max = v.maxCoeff();
  if (max == -std::numeric_limits<Scalar>::infinity()) return max;
  return max + std::log((v.derived().array() - max).exp().sum());
}

/// Normalized probabilities exp(v - log_sum_exp(v)). The caller must ensure
/// at least one entry is finite.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> softmax(
    const Eigen::DenseBase<Derived>& v) {
  const auto shifted = (v.derived().array() - v.maxCoeff()).exp().eval();
  return (shifted / shifted.sum()).matrix();
}

}  // namespace bmc

#endif  // BMC_LOGSPACE_HPP
