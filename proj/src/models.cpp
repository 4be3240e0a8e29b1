#include "bmc/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "bmc/distributions.hpp"
#include "bmc/logspace.hpp"
#include "bmc/specfun.hpp"

namespace bmc {

bool ObservationSpace::contains(double y) const noexcept {
  if (!std::isfinite(y)) return false;
  if (integer_valued && std::floor(y) != y) return false;
  const bool above = lower_inclusive ? y >= lower : y > lower;
  return above && y <= upper;
}

std::string ObservationSpace::describe() const {
  std::ostringstream os;
  os << (lower_inclusive ? "[" : "(") << lower << ", " << upper << (std::isinf(upper) ? ")" : "]");
  if (integer_valued) os << " integers";
  return os.str();
}

ModelSet::ModelSet(std::string label, std::vector<ModelComponent> components,
                   const Eigen::VectorXd& weights, ObservationSpace space)
    : label_(std::move(label)), components_(std::move(components)), space_(space) {
  if (components_.size() < 2) {
    throw std::invalid_argument("ModelSet: at least two components are required");
  }
  if (weights.size() != size()) {
    throw std::invalid_argument("ModelSet: one weight per component is required");
  }
  if (!weights.allFinite() || (weights.array() <= 0.0).any()) {
    throw std::invalid_argument("ModelSet: weights must be positive and finite");
  }
  weights_ = weights / weights.sum();
  log_weights_ = weights_.array().log().matrix();
}

void ModelSet::check_observation(double y) const {
  if (!space_.contains(y)) {
    std::ostringstream os;
    os << label_ << ": observation " << y << " outside " << space_.describe();
    throw std::domain_error(os.str());
  }
}

ModelSet ModelSet::permuted(std::span<const Eigen::Index> perm) const {
  if (static_cast<Eigen::Index>(perm.size()) != size()) {
    throw std::invalid_argument("ModelSet::permuted: permutation size mismatch");
  }
  std::vector<ModelComponent> comps;
  Eigen::VectorXd w(size());
  for (Eigen::Index k = 0; k < size(); ++k) {
    comps.push_back(component(perm[static_cast<std::size_t>(k)]));
    w(k) = weights_(perm[static_cast<std::size_t>(k)]);
  }
  return ModelSet(label_, std::move(comps), w, space_);
}

ModelSet ModelSet::reweighted(const Eigen::VectorXd& weights) const {
  return ModelSet(label_, components_, weights, space_);
}

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln sqrt(2 pi)

double normal_logpdf(double x, double mean, double variance) {
  const double z = x - mean;
  return -0.5 * z * z / variance - 0.5 * std::log(variance) - kLogSqrt2Pi;
}

double exponential_logpdf(double x, double rate) {
  return x > 0.0 ? std::log(rate) - rate * x : kNegInf;
}

double beta_logpdf(double p, double a, double b) {
  if (!(p > 0.0 && p < 1.0)) return kNegInf;
  return (a - 1.0) * std::log(p) + (b - 1.0) * std::log1p(-p) - log_beta(a, b);
}

Eigen::VectorXd equal_weights(Eigen::Index d) { return Eigen::VectorXd::Constant(d, 1.0 / d); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

ModelSet build(const Ex1Config&) {
  const Interval positive{0.0, kInf};
  ModelComponent uniform{
      "uniform",
      positive,
      [](double y, double theta) { return y > 0.0 && theta > y ? -std::log(theta) : kNegInf; },
      [](double theta) { return exponential_logpdf(theta, 1.0); },
      [](double y) { return std::log(exp_integral_e1(y)); },
      [](double y, RandomStream& rng) { return sample_truncated_inverse_exponential(y, rng); },
      [](RandomStream& rng) { return sample_exponential(1.0, rng); }};
  ModelComponent exponential{
      "exponential",
      positive,
      [](double y, double theta) {
        return y > 0.0 && theta > 0.0 ? std::log(theta) - theta * y : kNegInf;
      },
      [](double theta) { return exponential_logpdf(theta, 1.0); },
      [](double y) { return -2.0 * std::log1p(y); },
      [](double y, RandomStream& rng) { return sample_gamma(2.0, 1.0 + y, rng); },
      [](RandomStream& rng) { return sample_exponential(1.0, rng); }};
  ObservationSpace space{0.0, kInf, false, false};
  return ModelSet("ex1", {uniform, exponential}, equal_weights(2), space);
}

ModelComponent normal_mean_component(std::string name, double prior_mean) {
  const Interval real{kNegInf, kInf};
  return ModelComponent{
      std::move(name),
      real,
      [](double y, double theta) { return normal_logpdf(y, theta, 1.0); },
      [prior_mean](double theta) { return normal_logpdf(theta, prior_mean, 1.0); },
      [prior_mean](double y) { return normal_logpdf(y, prior_mean, 2.0); },
      [prior_mean](double y, RandomStream& rng) {
        return sample_normal(0.5 * (y + prior_mean), 0.5, rng);
      },
      [prior_mean](RandomStream& rng) { return sample_normal(prior_mean, 1.0, rng); }};
}

ModelSet build(const Ex2Config&) {
  ObservationSpace space{kNegInf, kInf, true, false};
  return ModelSet("ex2", {normal_mean_component("normal-prior-0", 0.0),
                          normal_mean_component("normal-prior-5", 5.0)},
                  equal_weights(2), space);
}

ModelComponent binomial_beta_component(int n, double a, double b) {
  const Interval unit{0.0, 1.0};
  auto log_lik = [n](double y, double p) {
    if (!(p > 0.0 && p < 1.0)) return kNegInf;
    const int k = static_cast<int>(y);
    return log_choose(n, k) + y * std::log(p) + (n - y) * std::log1p(-p);
  };
  auto log_marginal = [n, a, b](double y) {
    const int k = static_cast<int>(y);
    return log_choose(n, k) + log_beta(y + a, n - y + b) - log_beta(a, b);
  };
  return ModelComponent{
      "beta(" + fmt(a) + "," + fmt(b) + ")",
      unit,
      log_lik,
      [a, b](double p) { return beta_logpdf(p, a, b); },
      log_marginal,
      [n, a, b](double y, RandomStream& rng) { return sample_beta(y + a, n - y + b, rng); },
      [a, b](RandomStream& rng) { return sample_beta(a, b, rng); }};
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

ObservationSpace binomial_space(int n) { return ObservationSpace{0.0, static_cast<double>(n), true, true}; }

ModelSet build(const Ex3Config& c) {
  if (c.n < 1) throw std::invalid_argument("n must be a positive integer");
  require_positive(c.m, "m");
  return ModelSet("ex3", {binomial_beta_component(c.n, 1.0, 1.0), binomial_beta_component(c.n, c.m, c.m)},
                  equal_weights(2), binomial_space(c.n));
}

ModelSet build(const Ex3ThreeConfig& c) {
  if (c.n < 1) throw std::invalid_argument("n must be a positive integer");
  require_positive(c.a, "a");
  require_positive(c.b, "b");
  require_positive(c.c, "c");
  require_positive(c.d, "d");
  return ModelSet("ex3-three",
                  {binomial_beta_component(c.n, 1.0, 1.0), binomial_beta_component(c.n, c.a, c.b),
                   binomial_beta_component(c.n, c.c, c.d)},
                  equal_weights(3), binomial_space(c.n));
}

ModelSet build(const Ex4Config& c) {
  require_positive(c.a, "a");
  require_positive(c.b, "b");
  const double a = c.a;
  const double b = c.b;
  const Interval positive{0.0, kInf};
  // y ~ N(0, 1/omega), omega ~ Exp(a); omega | y ~ Ga(3/2, a + y^2/2).
  ModelComponent precision{
      "normal-precision",
      positive,
      [](double y, double omega) {
        return omega > 0.0 ? 0.5 * std::log(omega) - kLogSqrt2Pi - 0.5 * y * y * omega : kNegInf;
      },
      [a](double omega) { return exponential_logpdf(omega, a); },
      [a](double y) {
        return std::log(a) - kLogSqrt2Pi + log_gamma(1.5) - 1.5 * std::log(a + 0.5 * y * y);
      },
      [a](double y, RandomStream& rng) { return sample_gamma(1.5, a + 0.5 * y * y, rng); },
      [a](RandomStream& rng) { return sample_exponential(a, rng); }};
  // exp(y) ~ Exp(lambda), lambda ~ Exp(b); lambda | y ~ Ga(2, b + e^y).
  ModelComponent rate{
      "exponential-of-exp",
      positive,
      [](double y, double lambda) {
        return lambda > 0.0 ? std::log(lambda) + y - lambda * std::exp(y) : kNegInf;
      },
      [b](double lambda) { return exponential_logpdf(lambda, b); },
      [b](double y) {
        // ln(b e^y / (b + e^y)^2), arranged to stay finite for large |y|.
        const double log_sum = y > std::log(b) ? y + std::log1p(b * std::exp(-y))
                                               : std::log(b) + std::log1p(std::exp(y) / b);
        return std::log(b) + y - 2.0 * log_sum;
      },
      [b](double y, RandomStream& rng) { return sample_gamma(2.0, b + std::exp(y), rng); },
      [b](RandomStream& rng) { return sample_exponential(b, rng); }};
  ObservationSpace space{kNegInf, kInf, true, false};
  return ModelSet("ex4", {precision, rate}, equal_weights(2), space);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string example_name(const ExampleConfig& config) {
  return std::visit(overloaded{[](const Ex1Config&) { return std::string("ex1"); },
                               [](const Ex2Config&) { return std::string("ex2"); },
                               [](const Ex3Config&) { return std::string("ex3"); },
                               [](const Ex3ThreeConfig&) { return std::string("ex3-three"); },
                               [](const Ex4Config&) { return std::string("ex4"); }},
                    config);
}

std::string example_parameters(const ExampleConfig& config) {
  return std::visit(
      overloaded{[](const Ex1Config&) { return std::string(); },
                 [](const Ex2Config&) { return std::string(); },
                 [](const Ex3Config& c) { return "n=" + std::to_string(c.n) + ";m=" + fmt(c.m); },
                 [](const Ex3ThreeConfig& c) {
                   return "n=" + std::to_string(c.n) + ";a=" + fmt(c.a) + ";b=" + fmt(c.b) +
                          ";c=" + fmt(c.c) + ";d=" + fmt(c.d);
                 },
                 [](const Ex4Config& c) { return "a=" + fmt(c.a) + ";b=" + fmt(c.b); }},
      config);
}

ModelSet build_example(const ExampleConfig& config) {
  return std::visit([](const auto& c) { return build(c); }, config);
}

Eigen::VectorXd exact_log_marginals(const ModelSet& set, double y) {
  set.check_observation(y);
  Eigen::VectorXd out(set.size());
  for (Eigen::Index k = 0; k < set.size(); ++k) out(k) = set.component(k).exact_log_marginal(y);
  return out;
}

Eigen::VectorXd exact_posterior_probs(const ModelSet& set, double y) {
  return softmax(set.log_weights() + exact_log_marginals(set, y));
}

double exact_bayes_factor(const ModelSet& set, double y, Eigen::Index k, Eigen::Index j) {
  if (k < 0 || j < 0 || k >= set.size() || j >= set.size() || k == j) {
    throw std::out_of_range("exact_bayes_factor: invalid model indices");
  }
  set.check_observation(y);
  return std::exp(set.component(k).exact_log_marginal(y) - set.component(j).exact_log_marginal(y));
}

double ex3_bayes_factor_closed_form(int n, double m, int y) {
  if (n < 1) throw std::domain_error("ex3_bayes_factor_closed_form: n must be positive");
  if (y < 0 || y > n) throw std::domain_error("ex3_bayes_factor_closed_form: require 0 <= y <= n");
  if (!(m > 0.0)) throw std::domain_error("ex3_bayes_factor_closed_form: m must be positive");
  // m1 = 1/(n+1) under the uniform prior; the ratio below is
  //   y!(n-y)!/(n+1)! * (2m+n-1)!/((m+y-1)!(m+n-y-1)!) * (m-1)!^2/(2m-1)!
  const double log_b12 = log_factorial(y) + log_factorial(n - y) - log_factorial(n + 1) +
                         log_factorial(2.0 * m + n - 1.0) - log_factorial(m + y - 1.0) -
                         log_factorial(m + n - y - 1.0) + 2.0 * log_factorial(m - 1.0) -
                         log_factorial(2.0 * m - 1.0);
  return std::exp(log_b12);
}

}  // namespace bmc
