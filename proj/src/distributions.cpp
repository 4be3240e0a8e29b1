#include "bmc/distributions.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace bmc {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::domain_error(message);
}

}  // namespace

double sample_gamma(double shape, double rate, RandomStream& rng) {
  require(shape > 0.0 && std::isfinite(shape), "sample_gamma: shape must be positive");
  require(rate > 0.0 && std::isfinite(rate), "sample_gamma: rate must be positive");
  std::gamma_distribution<double> gamma(shape, 1.0);
  return gamma(rng.engine()) / rate;
}

double sample_beta(double a, double b, RandomStream& rng) {
  require(a > 0.0 && std::isfinite(a), "sample_beta: a must be positive");
  require(b > 0.0 && std::isfinite(b), "sample_beta: b must be positive");
  // Redraw in the (practically unreachable) case where rounding puts the
  // ratio on the boundary of the unit interval.
  for (;;) {
    const double x = sample_gamma(a, 1.0, rng);
    const double z = sample_gamma(b, 1.0, rng);
    const double p = x / (x + z);
    if (p > 0.0 && p < 1.0) return p;
  }
}

double sample_normal(double mean, double variance, RandomStream& rng) {
  require(std::isfinite(mean), "sample_normal: mean must be finite");
  require(variance > 0.0 && std::isfinite(variance), "sample_normal: variance must be positive");
  return mean + std::sqrt(variance) * rng.normal();
}

double sample_exponential(double rate, RandomStream& rng) {
  require(rate > 0.0 && std::isfinite(rate), "sample_exponential: rate must be positive");
  return rng.exponential() / rate;
}

double sample_truncated_inverse_exponential(double y, RandomStream& rng,
                                            AcceptRejectCounter* counter) {
  require(y > 0.0 && std::isfinite(y), "sample_truncated_inverse_exponential: y must be positive");
  for (std::int64_t i = 0; i < kMaxAcceptRejectProposals; ++i) {
    const double theta = y + rng.exponential();
    const double u = rng.uniform();
    if (counter) ++counter->proposals;
    // theta == y after rounding lies outside the open support.
    if (theta > y && u * theta < y) {
      if (counter) ++counter->accepted;
      return theta;
    }
  }
  throw std::runtime_error("sample_truncated_inverse_exponential: no acceptance after " +
                           std::to_string(kMaxAcceptRejectProposals) + " proposals at y = " +
                           std::to_string(y));
}

}  // namespace bmc
