#include <doctest.h>

#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bmc/estimators.hpp"

using namespace bmc;

namespace {

void check_valid(const EstimateResult& r) {
  CHECK(std::abs(r.probs.sum() - 1.0) <= 1e-10);
  CHECK((r.probs.array() >= 0.0).all());
  CHECK((r.probs.array() <= 1.0).all());
  CHECK((r.stderrs.array() >= 0.0).all());
}

double ex2_closed_form(double y) { return 1.0 / (1.0 + std::exp(5.0 * (2.0 * y - 5.0) / 4.0)); }

// Two components on (0, 1) with uniform posterior draws. The first has zero
// likelihood below `cutoff`; the second never has positive likelihood.
ModelSet dropping_set(double cutoff) {
  ModelComponent a{"a", {0.0, 1.0},
                   [cutoff](double, double t) { return t < cutoff ? kNegInf : 0.0; },
                   [](double) { return 0.0; },
                   [](double) { return 0.0; },
                   [](double, RandomStream& rng) { return rng.uniform(); },
                   [](RandomStream& rng) { return rng.uniform(); }};
  ModelComponent b = a;
  b.name = "b";
  b.log_likelihood = [](double, double) { return kNegInf; };
  return ModelSet("dropping", {a, b}, Eigen::Vector2d(1.0, 1.0), ObservationSpace{});
}

}  // namespace

TEST_SUITE("estimators") {
  TEST_CASE("mc_stderr") {
    SUBCASE("constant columns") {
      const Eigen::MatrixXd c = Eigen::MatrixXd::Constant(1000, 3, 0.25);
      CHECK(mc_stderr(c, StderrKind::Iid).isZero(0.0));
      CHECK(mc_stderr(c, StderrKind::BatchMeans).isZero(0.0));
    }
    SUBCASE("Bernoulli column matches the binomial formula") {
      RandomStream rng(12);
      const Eigen::Index T = 100000;
      const double p = 0.3;
      Eigen::MatrixXd b(T, 1);
      for (Eigen::Index t = 0; t < T; ++t) b(t, 0) = rng.uniform() < p ? 1.0 : 0.0;
      const double oracle = std::sqrt(p * (1.0 - p) / T);
      CHECK(std::abs(mc_stderr(b, StderrKind::Iid)(0) / oracle - 1.0) < 0.1);
    }
    SUBCASE("batch means agree with the naive error on i.i.d. draws") {
      for (std::uint64_t seed : {1u, 2u, 3u}) {
        RandomStream rng(seed);
        Eigen::MatrixXd x(10000, 2);
        for (Eigen::Index t = 0; t < x.rows(); ++t) {
          x(t, 0) = rng.normal();
          x(t, 1) = rng.uniform();
        }
        const Eigen::VectorXd naive = mc_stderr(x, StderrKind::Iid);
        const Eigen::VectorXd batch = mc_stderr(x, StderrKind::BatchMeans);
        CHECK(((batch.array() / naive.array() - 1.0).abs() < 0.25).all());
      }
    }
    SUBCASE("batch means sees autocorrelation") {
      RandomStream rng(4);
      Eigen::MatrixXd ar(40000, 1);
      double v = 0.0;
      for (Eigen::Index t = 0; t < ar.rows(); ++t) ar(t, 0) = v = 0.9 * v + rng.normal();
      // Inflation factor sqrt((1 + 0.9) / (1 - 0.9)) ~ 4.4.
      CHECK(mc_stderr(ar, StderrKind::BatchMeans)(0) > 3.0 * mc_stderr(ar, StderrKind::Iid)(0));
    }
    SUBCASE("too few draws") {
      CHECK_THROWS_AS(mc_stderr(Eigen::MatrixXd::Ones(1, 2), StderrKind::Iid), std::invalid_argument);
      CHECK_NOTHROW(mc_stderr(Eigen::MatrixXd::Ones(2, 2), StderrKind::BatchMeans));
    }
  }

  TEST_CASE("Scott on identical components is uniform") {
    const ModelSet ex2 = build_example(Ex2Config{});
    const ModelComponent c = ex2.component(0);
    const ModelSet set("identical", {c, c, c}, Eigen::Vector3d::Ones(), ex2.observation_space());
    const SampleMatrix s = sample_within_model_posteriors(set, 0.7, 100000, RandomStream(21));
    const EstimateResult r = scott_estimate(set, s);
    check_valid(r);
    for (Eigen::Index k = 0; k < 3; ++k) CHECK(std::abs(r.probs(k) - 1.0 / 3.0) < 3.0 * r.stderrs(k));
    CHECK(r.method == Method::Scott);
    CHECK(r.T == 100000);
  }

  TEST_CASE("Scott and Congdon are biased on example 1") {
    const ModelSet set = build_example(Ex1Config{});
    const SampleMatrix s = sample_within_model_posteriors(set, 0.9, 200000, RandomStream(31));
    const EstimateResult scott = scott_estimate(set, s);
    const EstimateResult congdon = congdon_estimate(set, s);
    check_valid(scott);
    check_valid(congdon);
    CHECK(exact_posterior_probs(set, 0.9)(0) < 0.5);
    CHECK(scott.probs(0) > 0.5 + 4.0 * scott.stderrs(0));
    CHECK(congdon.probs(0) > 0.5 + 4.0 * congdon.stderrs(0));
    CHECK(scott.dropped_rows == 0);
  }

  TEST_CASE("Congdon collapses on example 4 for large y") {
    const ModelSet set = build_example(Ex4Config{1.0, 1.0});
    const SampleMatrix s = sample_within_model_posteriors(set, 20.0, 10000, RandomStream(41));
    const EstimateResult r = congdon_estimate(set, s);
    check_valid(r);
    // E[estimate] = 0.051398 by two-dimensional quadrature over the
    // standardized gamma draws; it decays to zero only as y grows.
    CHECK(std::abs(r.probs(0) - 0.051398) < 4.0 * r.stderrs(0));
    CHECK(exact_posterior_probs(set, 20.0)(0) > 0.99);
    const SampleMatrix far = sample_within_model_posteriors(set, 60.0, 10000, RandomStream(42));
    CHECK(congdon_estimate(set, far).probs(0) < r.probs(0));
  }

  TEST_CASE("coupled Congdon is exact on example 2") {
    for (std::uint64_t seed : {1u, 99u}) {
      for (Eigen::Index T : {1, 2, 1000}) {
        RandomStream rng(seed);
        CHECK(std::abs(congdon_coupled_ex2(2.5, T, rng).probs(0) - 0.5) <= 1e-12);
      }
    }
    RandomStream rng(3);
    const EstimateResult one = congdon_coupled_ex2(0.0, 1, rng);
    CHECK(std::abs(one.probs(0) - 0.998074) < 1e-6);
    CHECK(one.stderrs.isZero(0.0));
    CHECK(std::abs(congdon_coupled_ex2(5.0, 10, rng).probs(0) - 0.001926) < 1e-6);
    for (int i = 0; i < 50; ++i) {
      const double y = -3.0 + 11.0 * i / 49.0;
      CAPTURE(y);
      const EstimateResult r = congdon_coupled_ex2(y, 100, rng);
      CHECK(std::abs(r.probs(0) - ex2_closed_form(y)) <= 1e-12);
      CHECK(r.method == Method::CongdonCoupled);
    }
  }

  TEST_CASE("independent streams break the example 2 exactness") {
    const ModelSet set = build_example(Ex2Config{});
    for (double y : {-1.0, 0.5, 2.0, 2.5, 3.5, 6.0}) {
      CAPTURE(y);
      const SampleMatrix s = sample_within_model_posteriors(set, y, 10000, RandomStream(51));
      const EstimateResult r = congdon_estimate(set, s);
      const double dev = r.probs(0) - ex2_closed_form(y);
      CHECK(dev != 0.0);
      if (y == 2.5) CHECK(std::abs(dev) <= 4.0 * r.stderrs(0));
      // Bias E[c1] - p1 at y = 2, from a 4e6-draw simulation of the
      // per-row conditional with independent normal draws.
      if (y == 2.0) CHECK(std::abs(dev - (-0.02993)) <= 4.0 * r.stderrs(0));
    }
  }

  TEST_CASE("corrected Gibbs tracks the exact posterior") {
    struct Case {
      ExampleConfig config;
      std::vector<double> ys;
    };
    const std::vector<Case> cases = {
        {Ex1Config{}, {0.1, 0.2, 0.9, 1.5, 2.5}},
        {Ex2Config{}, {-1.0, 1.0, 2.5, 3.0, 5.0}},
        {Ex3Config{15, 510.0}, {0, 3, 7, 12, 15}},
        // Interior observations: at the edges a model with probability near
        // 1e-6 is reached only through rare prior draws.
        {Ex3ThreeConfig{17, 2.5, 12.5, 501.5, 500.0}, {1, 4, 8, 11, 14}},
        {Ex4Config{1.0, 1.0}, {-2.0, 0.0, 2.0, 5.0, 8.0}},
    };
    std::uint64_t seed = 100;
    for (const auto& c : cases) {
      const ModelSet set = build_example(c.config);
      for (double y : c.ys) {
        CAPTURE(set.label());
        CAPTURE(y);
        const EstimateResult r = gibbs_corrected(set, y, 100000, RandomStream(++seed));
        check_valid(r);
        const Eigen::VectorXd exact = exact_posterior_probs(set, y);
        for (Eigen::Index k = 0; k < set.size(); ++k) {
          CHECK(std::abs(r.probs(k) - exact(k)) <= 4.0 * r.stderrs(k) + 1e-12);
        }
      }
    }
  }

  TEST_CASE("Gibbs on example 2 at the symmetric point") {
    const ModelSet set = build_example(Ex2Config{});
    const EstimateResult r = gibbs_corrected(set, 2.5, 100000, RandomStream(61));
    CHECK(std::abs(r.probs(0) - 0.5) <= 3.0 * r.stderrs(0));
  }

  TEST_CASE("Gibbs indicator estimator and burn-in") {
    const ModelSet set = build_example(Ex1Config{});
    GibbsOptions options;
    options.rao_blackwell = false;
    options.burn_in = 100;
    const EstimateResult r = gibbs_corrected(set, 0.9, 100000, RandomStream(62), options);
    check_valid(r);
    CHECK(std::abs(r.probs(0) - exact_posterior_probs(set, 0.9)(0)) <= 4.0 * r.stderrs(0));
    const EstimateResult rb = gibbs_corrected(set, 0.9, 100000, RandomStream(62));
    CHECK(rb.stderrs(0) < r.stderrs(0));

    const EstimateResult one = gibbs_corrected(set, 0.9, 1, RandomStream(63));
    CHECK(std::isnan(one.stderrs(0)));
    CHECK_THROWS_AS(gibbs_corrected(set, 0.9, 0, RandomStream(63)), std::invalid_argument);
    options.burn_in = -1;
    CHECK_THROWS_AS(gibbs_corrected(set, 0.9, 10, RandomStream(63), options), std::invalid_argument);
    CHECK_THROWS_AS(gibbs_corrected(set, -0.9, 10, RandomStream(63)), std::domain_error);
  }

  TEST_CASE("Dirac plug-in") {
    SUBCASE("equals Congdon on constant columns") {
      const std::vector<ExampleConfig> configs = {Ex1Config{}, Ex3ThreeConfig{}, Ex4Config{0.56, 0.7}};
      for (const auto& config : configs) {
        const ModelSet set = build_example(config);
        const double y = 1.0;
        Eigen::VectorXd theta_hat(set.size());
        RandomStream rng(71);
        for (Eigen::Index k = 0; k < set.size(); ++k) theta_hat(k) = set.component(k).sample_posterior(y, rng);
        SampleMatrix s;
        s.y = y;
        s.draws = theta_hat.transpose().replicate(1000, 1);
        const EstimateResult c = congdon_estimate(set, s);
        const EstimateResult d = dirac_plugin(set, theta_hat, y);
        for (Eigen::Index k = 0; k < set.size(); ++k) CHECK(c.probs(k) == doctest::Approx(d.probs(k)).epsilon(1e-14));
        CHECK(c.stderrs.isZero(0.0));
        CHECK(d.stderrs.isZero(0.0));
      }
    }
    SUBCASE("example 2 at the symmetric point") {
      const ModelSet set = build_example(Ex2Config{});
      const double y = 2.5;
      CHECK(dirac_plugin(set, Eigen::Vector2d(y / 2.0, (y + 5.0) / 2.0), y).probs(0) == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("example 1 at posterior means") {
      const ModelSet set = build_example(Ex1Config{});
      const double y = 0.2;
      const Eigen::Vector2d means(std::exp(-y) / boost::math::expint(1, y), 2.0 / (1.0 + y));
      CHECK(dirac_plugin(set, means, y).probs(0) == doctest::Approx(0.7721619978267405).epsilon(1e-12));
    }
    SUBCASE("errors") {
      const ModelSet set = build_example(Ex1Config{});
      // theta_1 below y gives zero likelihood for the uniform model; the
      // second component still contributes.
      CHECK_NOTHROW(dirac_plugin(set, Eigen::Vector2d(0.1, 1.0), 0.5));
      CHECK_THROWS_AS(dirac_plugin(set, Eigen::Vector2d(-1.0, 1.0), 0.5), std::domain_error);
      CHECK_THROWS_AS(dirac_plugin(set, Eigen::Vector3d(1.0, 1.0, 1.0), 0.5), std::invalid_argument);
      const ModelSet zero = dropping_set(1.0);
      CHECK_THROWS_AS(dirac_plugin(zero, Eigen::Vector2d(0.5, 0.5), 0.0), std::domain_error);
    }
  }

  TEST_CASE("rows without positive density") {
    {
      const ModelSet set = dropping_set(0.0005);
      const SampleMatrix s = sample_within_model_posteriors(set, 0.0, 200000, RandomStream(81));
      const EstimateResult r = scott_estimate(set, s);
      CHECK(r.dropped_rows > 0);
      CHECK(r.dropped_rows < 200);
      CHECK(r.probs(0) == 1.0);
    }
    {
      const ModelSet set = dropping_set(0.01);
      const SampleMatrix s = sample_within_model_posteriors(set, 0.0, 200000, RandomStream(82));
      CHECK_THROWS_AS(congdon_estimate(set, s), std::runtime_error);
    }
    const ModelSet set = build_example(Ex1Config{});
    SampleMatrix wrong;
    wrong.y = 0.5;
    wrong.draws = Eigen::MatrixXd::Ones(10, 3);
    CHECK_THROWS_AS(scott_estimate(set, wrong), std::invalid_argument);
  }

  TEST_CASE("label equivariance") {
    const ModelSet set = build_example(Ex3ThreeConfig{25, 1.5, 4.0, 540.0, 200.0});
    const std::vector<Eigen::Index> perm = {2, 0, 1};
    const std::vector<std::uint64_t> ids = {0, 1, 2};
    const std::vector<std::uint64_t> permuted_ids = {2, 0, 1};
    const ModelSet permuted = set.permuted(perm);
    for (std::uint64_t seed : {5u, 6u, 7u}) {
      const RandomStream base(seed);
      const double y = 9.0;
      const SampleMatrix s = sample_within_model_posteriors(set, y, 20000, base, ids);
      const SampleMatrix sp = sample_within_model_posteriors(permuted, y, 20000, base, permuted_ids);
      const EstimateResult results[][2] = {
          {scott_estimate(set, s), scott_estimate(permuted, sp)},
          {congdon_estimate(set, s), congdon_estimate(permuted, sp)},
          {gibbs_corrected(set, y, 20000, base, ids), gibbs_corrected(permuted, y, 20000, base, permuted_ids)},
      };
      for (const auto& [original, swapped] : results) {
        for (Eigen::Index k = 0; k < 3; ++k) {
          CHECK(std::abs(swapped.probs(k) - original.probs(perm[k])) <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("weight scaling leaves every estimator unchanged") {
    const ModelSet base_set = build_example(Ex3ThreeConfig{13, 0.5, 100.5, 20.0, 10.0});
    const Eigen::Vector3d w(0.2, 0.5, 0.3);
    const ModelSet a = base_set.reweighted(w);
    const ModelSet b = base_set.reweighted(7.3 * w);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const RandomStream rng(seed);
      const double y = 4.0;
      const SampleMatrix s = sample_within_model_posteriors(a, y, 20000, rng);
      const auto close = [](const EstimateResult& x, const EstimateResult& z) {
        return ((x.probs - z.probs).array().abs() <= 1e-12).all();
      };
      CHECK(close(scott_estimate(a, s), scott_estimate(b, s)));
      CHECK(close(congdon_estimate(a, s), congdon_estimate(b, s)));
      CHECK(close(gibbs_corrected(a, y, 20000, rng), gibbs_corrected(b, y, 20000, rng)));
      CHECK(close(exact_estimate(a, y), exact_estimate(b, y)));
    }
  }

  TEST_CASE("method names") {
    CHECK(to_string(Method::GibbsCorrected) == "gibbs");
    CHECK(to_string(Method::CongdonCoupled) == "coupled");
    CHECK(to_string(Method::DiracPlugin) == "dirac");
  }
}
