#ifndef BMC_MODELS_HPP
#define BMC_MODELS_HPP

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bmc/random.hpp"

namespace bmc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open interval (lower, upper) holding a model parameter.
struct Interval {
  double lower = kNegInf;
  double upper = kInf;

  bool contains(double x) const noexcept { return x > lower && x < upper; }
};

/// Admissible observations for a model set.
struct ObservationSpace {
  double lower = kNegInf;
  double upper = kInf;
  bool lower_inclusive = true;
  bool integer_valued = false;

  bool contains(double y) const noexcept;
  std::string describe() const;
};

/// One candidate model. Densities are on the log scale and return -inf
/// outside their support.
struct ModelComponent {
  std::string name;
  Interval support;
  std::function<double(double y, double theta)> log_likelihood;
  std::function<double(double theta)> log_prior;
  std::function<double(double y)> exact_log_marginal;
  std::function<double(double y, RandomStream&)> sample_posterior;
  std::function<double(RandomStream&)> sample_prior;
};

/// Candidate models with their prior probabilities. Immutable once built.
class ModelSet {
 public:
  /// `weights` must be positive and finite; they are rescaled to sum to one.
  ModelSet(std::string label, std::vector<ModelComponent> components,
           const Eigen::VectorXd& weights, ObservationSpace space);

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(components_.size()); }
  const std::string& label() const noexcept { return label_; }
  const ModelComponent& component(Eigen::Index k) const { return components_.at(static_cast<std::size_t>(k)); }
  const std::vector<ModelComponent>& components() const noexcept { return components_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  const Eigen::VectorXd& log_weights() const noexcept { return log_weights_; }
  const ObservationSpace& observation_space() const noexcept { return space_; }

  /// Throws std::domain_error when y is outside the observation space.
  void check_observation(double y) const;

  /// Component k of the result is component perm[k] of this set.
  ModelSet permuted(std::span<const Eigen::Index> perm) const;
  /// Same components with new (unnormalized) prior weights.
  ModelSet reweighted(const Eigen::VectorXd& weights) const;

 private:
  std::string label_;
  std::vector<ModelComponent> components_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd log_weights_;
  ObservationSpace space_;
};

// Example families. Priors are rate-parameterized where exponential.

/// Uniform U(0, theta) against Exp(theta), both with an Exp(1) prior.
struct Ex1Config {};
/// N(theta, 1) with prior N(0, 1) against N(theta, 1) with prior N(5, 1).
struct Ex2Config {};
/// Binomial(n, p) with p ~ Be(1, 1) against p ~ Be(m, m).
struct Ex3Config {
  int n = 15;
  double m = 100.0;
};
/// Binomial(n, p) with priors Be(1, 1), Be(a, b) and Be(c, d).
struct Ex3ThreeConfig {
  int n = 17;
  double a = 2.5, b = 12.5, c = 501.5, d = 500.0;
};
/// N(0, 1/omega), omega ~ Exp(a) against exp(y) ~ Exp(lambda), lambda ~ Exp(b).
struct Ex4Config {
  double a = 1.0;
  double b = 1.0;
};

using ExampleConfig = std::variant<Ex1Config, Ex2Config, Ex3Config, Ex3ThreeConfig, Ex4Config>;

/// Short identifier: ex1, ex2, ex3, ex3-three, ex4.
std::string example_name(const ExampleConfig& config);
/// Parameters as "key=value" pairs separated by ';' (empty for ex1/ex2).
std::string example_parameters(const ExampleConfig& config);

/// Builds the model set for an example with equal prior weights.
/// Throws std::invalid_argument on invalid parameters.
ModelSet build_example(const ExampleConfig& config);

/// Vector of exact log marginal likelihoods ln m_k(y).
Eigen::VectorXd exact_log_marginals(const ModelSet& set, double y);

/// Exact P(M = k | y) for every k, normalized in log space.
Eigen::VectorXd exact_posterior_probs(const ModelSet& set, double y);

/// m_k(y) / m_j(y), zero-based indices.
double exact_bayes_factor(const ModelSet& set, double y, Eigen::Index k, Eigen::Index j);

/// Closed-form Bayes factor of Be(1,1) against Be(m,m) in the binomial
/// example, with factorials generalized through the gamma function.
double ex3_bayes_factor_closed_form(int n, double m, int y);

}  // namespace bmc

#endif  // BMC_MODELS_HPP
