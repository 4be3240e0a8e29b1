#include "bmc/samplers.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bmc {

namespace {

void require_draw_count(Eigen::Index T) {
  if (T < 1) throw std::invalid_argument("draw count T must be at least 1");
}

}  // namespace

SampleMatrix sample_within_model_posteriors(const ModelSet& set, double y, Eigen::Index T,
                                            const RandomStream& base) {
  std::vector<std::uint64_t> ids(static_cast<std::size_t>(set.size()));
  for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = k;
  return sample_within_model_posteriors(set, y, T, base, ids);
}

SampleMatrix sample_within_model_posteriors(const ModelSet& set, double y, Eigen::Index T,
                                            const RandomStream& base,
                                            std::span<const std::uint64_t> column_ids) {
  require_draw_count(T);
  set.check_observation(y);
  if (static_cast<Eigen::Index>(column_ids.size()) != set.size()) {
    throw std::invalid_argument("sample_within_model_posteriors: one stream id per column");
  }
  SampleMatrix out;
  out.example = set.label();
  out.y = y;
  out.draws.resize(T, set.size());
  for (Eigen::Index k = 0; k < set.size(); ++k) {
    RandomStream rng = base.substream(column_ids[static_cast<std::size_t>(k)]);
    const auto& sampler = set.component(k).sample_posterior;
    for (Eigen::Index t = 0; t < T; ++t) out.draws(t, k) = sampler(y, rng);
    out.columns.push_back({rng.seed(), rng.stream_id(), ColumnTarget::Posterior});
  }
  return out;
}

SampleMatrix coupled_posterior_pair_ex2(double y, Eigen::Index T, RandomStream& rng) {
  require_draw_count(T);
  if (!std::isfinite(y)) throw std::domain_error("coupled_posterior_pair_ex2: y must be finite");
  SampleMatrix out;
  out.example = "ex2";
  out.y = y;
  out.draws.resize(T, 2);
  const double scale = std::numbers::sqrt2 / 2.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    const double shift = scale * rng.normal();
    out.draws(t, 0) = 0.5 * y + shift;
    out.draws(t, 1) = 0.5 * (y + 5.0) + shift;
  }
  out.columns.assign(2, {rng.seed(), rng.stream_id(), ColumnTarget::Coupled});
  return out;
}

}  // namespace bmc
