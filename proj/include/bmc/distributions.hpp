#ifndef BMC_DISTRIBUTIONS_HPP
#define BMC_DISTRIBUTIONS_HPP

#include <cstdint>

#include "bmc/random.hpp"

namespace bmc {

// Exact samplers. All take the stream by reference and are otherwise pure;
// invalid parameters throw std::domain_error.

/// Gamma(shape, rate), density proportional to x^{shape-1} e^{-rate x}.
double sample_gamma(double shape, double rate, RandomStream& rng);

/// Beta(a, b).
double sample_beta(double a, double b, RandomStream& rng);

/// Normal with the given mean and variance (not standard deviation).
double sample_normal(double mean, double variance, RandomStream& rng);

/// Exponential with the given rate.
double sample_exponential(double rate, RandomStream& rng);

/// Proposal budget for the accept-reject sampler below.
inline constexpr std::int64_t kMaxAcceptRejectProposals = 10'000'000;

struct AcceptRejectCounter {
  std::int64_t proposals = 0;
  std::int64_t accepted = 0;
};

/// Draws from the density proportional to theta^{-1} e^{-theta} on (y, inf).
///
/// Proposals are y + Exp(1) and are accepted with probability y / theta.
/// Throws std::domain_error for y <= 0 and std::runtime_error when the
/// proposal budget is exhausted.
double sample_truncated_inverse_exponential(double y, RandomStream& rng,
                                            AcceptRejectCounter* counter = nullptr);

}  // namespace bmc

#endif  // BMC_DISTRIBUTIONS_HPP
