#ifndef BMC_SAMPLERS_HPP
#define BMC_SAMPLERS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bmc/distributions.hpp"
#include "bmc/models.hpp"
#include "bmc/random.hpp"

namespace bmc {

enum class ColumnTarget { Posterior, Prior, Coupled };

struct ColumnSource {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  ColumnTarget target = ColumnTarget::Posterior;
};

/// T x D draws; column k holds draws for component k.
struct SampleMatrix {
  Eigen::MatrixXd draws;
  std::string example;
  double y = 0.0;
  std::vector<ColumnSource> columns;

  Eigen::Index rows() const noexcept { return draws.rows(); }
  Eigen::Index cols() const noexcept { return draws.cols(); }
};

/// Independent exact draws from each within-model posterior pi_k(theta | y).
/// Column k uses base.substream(k).
SampleMatrix sample_within_model_posteriors(const ModelSet& set, double y, Eigen::Index T,
                                            const RandomStream& base);

/// As above with column k drawn from base.substream(column_ids[k]).
SampleMatrix sample_within_model_posteriors(const ModelSet& set, double y, Eigen::Index T,
                                            const RandomStream& base,
                                            std::span<const std::uint64_t> column_ids);

/// Common-random-number posteriors for the two normal-mean models:
/// theta1 = y/2 + eps/sqrt(2), theta2 = (y+5)/2 + eps/sqrt(2), one eps per row.
SampleMatrix coupled_posterior_pair_ex2(double y, Eigen::Index T, RandomStream& rng);

}  // namespace bmc

#endif  // BMC_SAMPLERS_HPP
