#include "bmc/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmc/logspace.hpp"

namespace bmc {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::Exact: return "exact";
    case Method::Scott: return "scott";
    case Method::Congdon: return "congdon";
    case Method::GibbsCorrected: return "gibbs";
    case Method::DiracPlugin: return "dirac";
    case Method::CongdonCoupled: return "coupled";
  }
  return "unknown";
}

Eigen::VectorXd mc_stderr(const Eigen::Ref<const Eigen::MatrixXd>& per_draw, StderrKind kind) {
  const Eigen::Index T = per_draw.rows();
  if (T < 2) throw std::invalid_argument("mc_stderr: at least two draws are required");

  // Deviations are taken from the first row so that constant columns give
  // exactly zero.
  auto column_sd = [](const Eigen::Ref<const Eigen::MatrixXd>& m) {
    const Eigen::MatrixXd shifted = m.rowwise() - m.row(0);
    const Eigen::RowVectorXd mean = shifted.colwise().mean();
    const Eigen::MatrixXd centered = shifted.rowwise() - mean;
    return ((centered.array().square().colwise().sum()) / static_cast<double>(m.rows() - 1))
        .sqrt()
        .matrix()
        .transpose()
        .eval();
  };

  if (kind == StderrKind::Iid) {
    return column_sd(per_draw) / std::sqrt(static_cast<double>(T));
  }

  const auto batches = static_cast<Eigen::Index>(std::ceil(std::sqrt(static_cast<double>(T))));
  const Eigen::Index batch_size = T / batches;
  if (batch_size < 1) {
    // Only reachable for T in {2, 3}; fall back to one draw per batch.
    return column_sd(per_draw) / std::sqrt(static_cast<double>(T));
  }
  Eigen::MatrixXd means(batches, per_draw.cols());
  for (Eigen::Index b = 0; b < batches; ++b) {
    means.row(b) = per_draw.middleRows(b * batch_size, batch_size).colwise().mean();
  }
  // Var(overall mean) ~ Var(batch mean) / batches.
  return column_sd(means) / std::sqrt(static_cast<double>(batches));
}

namespace {

Eigen::VectorXd undefined_stderrs(Eigen::Index d) {
  return Eigen::VectorXd::Constant(d, std::numeric_limits<double>::quiet_NaN());
}

void check_samples(const ModelSet& set, const SampleMatrix& samples) {
  if (samples.cols() != set.size()) {
    throw std::invalid_argument("sample matrix has " + std::to_string(samples.cols()) +
                                " columns for " + std::to_string(set.size()) + " models");
  }
  if (samples.rows() < 1) throw std::invalid_argument("sample matrix is empty");
  set.check_observation(samples.y);
}

/// Averages the per-row normalized weights w_k f_k (times pi_k when
/// `with_prior`) over the rows of `samples`.
EstimateResult average_conditionals(const ModelSet& set, const SampleMatrix& samples,
                                    bool with_prior, Method method) {
  check_samples(set, samples);
  const Eigen::Index T = samples.rows();
  const Eigen::Index D = set.size();
  const double y = samples.y;

  Eigen::MatrixXd conditionals(T, D);
  Eigen::VectorXd terms(D);
  Eigen::Index kept = 0;
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index k = 0; k < D; ++k) {
      const auto& comp = set.component(k);
      const double theta = samples.draws(t, k);
      double term = set.log_weights()(k) + comp.log_likelihood(y, theta);
      if (with_prior) term += comp.log_prior(theta);
      terms(k) = term;
    }
    const double lse = log_sum_exp(terms);
    if (!std::isfinite(lse)) continue;
    conditionals.row(kept++) = softmax(terms).transpose();
  }

  const Eigen::Index dropped = T - kept;
  if (kept == 0 || static_cast<double>(dropped) > kMaxDroppedFraction * static_cast<double>(T)) {
    throw std::runtime_error(std::string(to_string(method)) + ": " + std::to_string(dropped) +
                             " of " + std::to_string(T) + " draws had no positive density");
  }

  const auto used = conditionals.topRows(kept);
  EstimateResult out;
  out.method = method;
  out.T = T;
  out.seed = samples.columns.empty() ? 0 : samples.columns.front().seed;
  out.dropped_rows = dropped;
  Eigen::VectorXd mean = used.colwise().mean().transpose();
  out.probs = mean / mean.sum();
  out.stderrs = kept >= 2 ? mc_stderr(used, StderrKind::Iid) : undefined_stderrs(D);
  return out;
}

// Gumbel-max draw of an index with probabilities proportional to exp(log_p),
// one Gumbel variate per component taken from that component's stream.
Eigen::Index gumbel_argmax(const Eigen::VectorXd& log_p, std::vector<RandomStream>& streams) {
  Eigen::Index best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < log_p.size(); ++k) {
    const double g = -std::log(streams[static_cast<std::size_t>(k)].exponential());
    const double score = log_p(k) + g;
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  if (best < 0) throw std::logic_error("gumbel_argmax: no component has positive probability");
  return best;
}

void draw_parameters(const ModelSet& set, double y, Eigen::Index model, Eigen::VectorXd& theta,
                     std::vector<RandomStream>& streams) {
  for (Eigen::Index k = 0; k < set.size(); ++k) {
    auto& rng = streams[static_cast<std::size_t>(k)];
    const auto& comp = set.component(k);
    theta(k) = k == model ? comp.sample_posterior(y, rng) : comp.sample_prior(rng);
  }
}

}  // namespace

EstimateResult exact_estimate(const ModelSet& set, double y) {
  EstimateResult out;
  out.method = Method::Exact;
  out.probs = exact_posterior_probs(set, y);
  out.stderrs = Eigen::VectorXd::Zero(set.size());
  return out;
}

EstimateResult scott_estimate(const ModelSet& set, const SampleMatrix& samples) {
  return average_conditionals(set, samples, false, Method::Scott);
}

EstimateResult congdon_estimate(const ModelSet& set, const SampleMatrix& samples) {
  return average_conditionals(set, samples, true, Method::Congdon);
}

EstimateResult congdon_coupled_ex2(double y, Eigen::Index T, RandomStream& rng) {
  const ModelSet set = build_example(Ex2Config{});
  const SampleMatrix samples = coupled_posterior_pair_ex2(y, T, rng);
  EstimateResult out = average_conditionals(set, samples, true, Method::CongdonCoupled);
  if (T < 2) out.stderrs = Eigen::VectorXd::Zero(2);
  return out;
}

EstimateResult gibbs_corrected(const ModelSet& set, double y, Eigen::Index T,
                               const RandomStream& base, const GibbsOptions& options) {
  std::vector<std::uint64_t> ids(static_cast<std::size_t>(set.size()));
  for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = k;
  return gibbs_corrected(set, y, T, base, ids, options);
}

EstimateResult gibbs_corrected(const ModelSet& set, double y, Eigen::Index T,
                               const RandomStream& base, std::span<const std::uint64_t> column_ids,
                               const GibbsOptions& options) {
  if (T < 1) throw std::invalid_argument("gibbs_corrected: T must be at least 1");
  if (options.burn_in < 0) throw std::invalid_argument("gibbs_corrected: negative burn-in");
  if (static_cast<Eigen::Index>(column_ids.size()) != set.size()) {
    throw std::invalid_argument("gibbs_corrected: one stream id per component");
  }
  set.check_observation(y);
  const Eigen::Index D = set.size();

  std::vector<RandomStream> streams;
  streams.reserve(column_ids.size());
  for (auto id : column_ids) streams.push_back(base.substream(id));

  Eigen::Index model = gumbel_argmax(set.log_weights(), streams);
  Eigen::VectorXd theta(D);
  draw_parameters(set, y, model, theta, streams);

  Eigen::MatrixXd recorded(T, D);
  Eigen::VectorXd log_cond(D);
  for (Eigen::Index sweep = 0; sweep < options.burn_in + T; ++sweep) {
    for (Eigen::Index k = 0; k < D; ++k) {
      log_cond(k) = set.log_weights()(k) + set.component(k).log_likelihood(y, theta(k));
    }
    // theta_model was drawn from its posterior, so its likelihood is positive.
    if (!std::isfinite(log_cond(model))) {
      throw std::logic_error("gibbs_corrected: posterior draw has zero likelihood");
    }
    model = gumbel_argmax(log_cond, streams);
    if (sweep >= options.burn_in) {
      const Eigen::Index t = sweep - options.burn_in;
      if (options.rao_blackwell) {
        recorded.row(t) = softmax(log_cond).transpose();
      } else {
        recorded.row(t).setZero();
        recorded(t, model) = 1.0;
      }
    }
    draw_parameters(set, y, model, theta, streams);
  }

  EstimateResult out;
  out.method = Method::GibbsCorrected;
  out.T = T;
  out.seed = base.seed();
  Eigen::VectorXd mean = recorded.colwise().mean().transpose();
  out.probs = mean / mean.sum();
  out.stderrs = T >= 2 ? mc_stderr(recorded, StderrKind::BatchMeans) : undefined_stderrs(D);
  return out;
}

EstimateResult dirac_plugin(const ModelSet& set, const Eigen::Ref<const Eigen::VectorXd>& theta_hat,
                            double y) {
  if (theta_hat.size() != set.size()) {
    throw std::invalid_argument("dirac_plugin: one plug-in value per model is required");
  }
  set.check_observation(y);
  Eigen::VectorXd terms(set.size());
  for (Eigen::Index k = 0; k < set.size(); ++k) {
    const auto& comp = set.component(k);
    if (!comp.support.contains(theta_hat(k))) {
      throw std::domain_error("dirac_plugin: plug-in value outside the support of " + comp.name);
    }
    terms(k) = set.log_weights()(k) + comp.log_likelihood(y, theta_hat(k)) + comp.log_prior(theta_hat(k));
  }
  if (!std::isfinite(log_sum_exp(terms))) {
    throw std::domain_error("dirac_plugin: every plug-in density is zero");
  }
  EstimateResult out;
  out.method = Method::DiracPlugin;
  out.probs = softmax(terms);
  out.stderrs = Eigen::VectorXd::Zero(set.size());
  out.T = 1;
  return out;
}

}  // namespace bmc
