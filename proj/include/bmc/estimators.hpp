#ifndef BMC_ESTIMATORS_HPP
#define BMC_ESTIMATORS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string_view>

#include "bmc/models.hpp"
#include "bmc/random.hpp"
#include "bmc/samplers.hpp"

namespace bmc {

enum class Method { Exact, Scott, Congdon, GibbsCorrected, DiracPlugin, CongdonCoupled };

std::string_view to_string(Method method) noexcept;

/// Posterior model probabilities with Monte Carlo standard errors.
///
/// `stderrs` is zero for deterministic methods and NaN when fewer than two
/// draws were used. `dropped_rows` counts draws whose conditional vector
/// was undefined (every weighted density zero).
struct EstimateResult {
  Method method = Method::Exact;
  Eigen::VectorXd probs;
  Eigen::VectorXd stderrs;
  Eigen::Index T = 0;
  std::uint64_t seed = 0;
  Eigen::Index dropped_rows = 0;
};

enum class StderrKind {
  Iid,         ///< column standard deviation / sqrt(T)
  BatchMeans,  ///< ceil(sqrt(T)) equal batches
};

/// Standard errors of the column means of a T x D matrix of per-draw
/// conditional probabilities. Throws std::invalid_argument when T < 2.
Eigen::VectorXd mc_stderr(const Eigen::Ref<const Eigen::MatrixXd>& per_draw, StderrKind kind);

/// Largest fraction of dropped rows tolerated by the averaging estimators.
inline constexpr double kMaxDroppedFraction = 1e-3;

/// Exact posterior probabilities wrapped as an estimate.
EstimateResult exact_estimate(const ModelSet& set, double y);

/// Within-model averaging of normalized likelihoods:
/// p_k proportional to w_k mean_t f_k(y|theta_k^t) / sum_j w_j f_j(y|theta_j^t).
EstimateResult scott_estimate(const ModelSet& set, const SampleMatrix& samples);

/// As scott_estimate with each likelihood multiplied by its prior density
/// at the drawn parameter.
EstimateResult congdon_estimate(const ModelSet& set, const SampleMatrix& samples);

/// congdon_estimate on common-random-number draws for the normal-mean pair.
/// Equal to the exact posterior for every T and seed.
EstimateResult congdon_coupled_ex2(double y, Eigen::Index T, RandomStream& rng);

struct GibbsOptions {
  Eigen::Index burn_in = 0;
  /// Average P(M = k | theta, y) (true) or the indicator of the drawn M.
  bool rao_blackwell = true;
};

/// Gibbs sampler on the joint of (theta_1..theta_D, M) with the true priors
/// as pseudo-priors. Each sweep draws M given theta, then theta_M from its
/// posterior and every other theta_j from its prior. Component k consumes
/// randomness only from base.substream(k).
EstimateResult gibbs_corrected(const ModelSet& set, double y, Eigen::Index T,
                               const RandomStream& base, const GibbsOptions& options = {});

/// As above with component k driven by base.substream(column_ids[k]).
EstimateResult gibbs_corrected(const ModelSet& set, double y, Eigen::Index T,
                               const RandomStream& base, std::span<const std::uint64_t> column_ids,
                               const GibbsOptions& options = {});

/// Point-mass limit of congdon_estimate at theta_hat.
/// Throws std::domain_error if every plug-in density is zero.
EstimateResult dirac_plugin(const ModelSet& set, const Eigen::Ref<const Eigen::VectorXd>& theta_hat,
                            double y);

}  // namespace bmc

#endif  // BMC_ESTIMATORS_HPP
