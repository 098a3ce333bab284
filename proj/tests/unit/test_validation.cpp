#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>
#include <cmath>

#include "rbb/checks.hpp"
#include "rbb/validation.hpp"

using rbb::InitialConfig;
using rbb::LoadVector;
using rbb::RandomSource;
using rbb::WalkLaw;

TEST(QuadraticDrift, ExactTwoBins) {
  const auto r = rbb::check_quadratic_drift(LoadVector({1, 1}), 0, RandomSource(1));
  EXPECT_TRUE(r.passed());
  EXPECT_DOUBLE_EQ(r.statistic, 3.0);
  EXPECT_DOUBLE_EQ(r.threshold, 6.0);
}

TEST(QuadraticDrift, SingleBin) {
  EXPECT_TRUE(rbb::check_quadratic_drift(LoadVector({4}), 0, RandomSource(1)).passed());
  EXPECT_TRUE(rbb::check_quadratic_drift(LoadVector({40}), 10'000, RandomSource(1)).passed());
}

TEST(QuadraticDrift, MonteCarloUniform) {
  const auto r = rbb::check_quadratic_drift(InitialConfig::uniform().build(50, 200), 100'000,
                                            RandomSource(2));
  EXPECT_TRUE(r.passed()) << r.detail;
}

TEST(QuadraticDrift, DroppingTheAdditiveTermFails) {
  RandomSource g(3);
  const LoadVector x = rbb::random_config(50, 200, g);
  EXPECT_FALSE(rbb::check_quadratic_drift(x, 10'000, RandomSource(4), -100.0).passed());
}

TEST(ExponentialDrift, ExactTwoBins) {
  const auto r = rbb::check_exponential_drift(LoadVector({2, 0}), 0.1, 0, RandomSource(1));
  EXPECT_TRUE(r.passed());
  const double a = 0.1;
  const double phi = std::exp(0.2) + 1;
  const double g = std::exp((std::exp(a) - 1) / 2);
  EXPECT_NEAR(r.threshold, phi * std::exp(-a) * g + g, 1e-12);
  EXPECT_NEAR(r.statistic, 0.5 * phi + 0.5 * 2 * std::exp(a), 1e-12);
}

TEST(ExponentialDrift, SmallAlphaLimit) {
  EXPECT_TRUE(rbb::check_exponential_drift(LoadVector({3, 0, 1}), 1e-8, 0, RandomSource(1)).passed());
}

TEST(ExponentialDrift, MonteCarloPracticalAlpha) {
  const double a = rbb::practical_alpha(50, 200);
  const auto r = rbb::check_exponential_drift(InitialConfig::uniform().build(50, 200), a, 100'000,
                                              RandomSource(5));
  EXPECT_TRUE(r.passed()) << r.detail;
}

TEST(ExponentialDrift, ShrunkBoundFails) {
  RandomSource g(6);
  const LoadVector x = rbb::random_config(50, 200, g);
  EXPECT_FALSE(rbb::check_exponential_drift(x, rbb::practical_alpha(50, 200), 10'000,
                                            RandomSource(7), 0.98)
                   .passed());
}

TEST(Supermartingale, PracticalAlphaIsStoppedAtOnce) {
  rbb::SupermartingaleSpec spec;
  const auto r = rbb::check_supermartingale(spec, 0, rbb::practical_params(20, 100), 1000,
                                            RandomSource(8));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.statistic, 0.0);
}

TEST(Supermartingale, LiveSeriesPasses) {
  rbb::SupermartingaleSpec spec;
  const auto r = rbb::check_supermartingale(spec, 0, rbb::default_params(20, 100).with_alpha(0.2),
                                            2000, RandomSource(9));
  EXPECT_TRUE(r.passed()) << r.detail;
  EXPECT_EQ(r.detail.find("nontrivial=0 "), std::string::npos) << r.detail;
}

TEST(Supermartingale, InflatedSeriesFails) {
  rbb::SupermartingaleSpec spec;
  spec.log_perturbation = 0.1;
  const auto r = rbb::check_supermartingale(spec, 0, rbb::default_params(20, 100).with_alpha(0.2),
                                            2000, RandomSource(9));
  EXPECT_FALSE(r.passed()) << r.detail;
}

TEST(Coupling, SingleBinAndSweep) {
  EXPECT_TRUE(rbb::check_coupling_dominance(1, 5, 100, 10, RandomSource(1)).passed());
  EXPECT_TRUE(rbb::check_coupling_dominance(64, 256, 500, 50, RandomSource(2)).passed());
  EXPECT_FALSE(rbb::check_coupling_dominance(64, 256, 500, 50, RandomSource(2), true).passed());
}

// Independent oracle: Boost's binomial pmf.
TEST(BinomialBound, AgreesWithBoost) {
  double worst = -1e300;
  for (int n = 8; n <= 128; ++n) {
    boost::math::binomial_distribution<double> bin(n, 1.0 / n);
    for (int g = 1; g <= n; ++g) {
      worst = std::max(worst, std::log2(boost::math::pdf(bin, g)) + g);
    }
  }
  const auto r = rbb::check_binomial_bound(8, 128);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(worst, 0.0);
  EXPECT_NEAR(r.statistic, worst, 1e-9);
}

TEST(BinomialBound, Endpoints) {
  EXPECT_NEAR(std::pow(7.0 / 8.0, 7), 0.3927, 1e-4);
  EXPECT_TRUE(rbb::check_binomial_bound(8, 8).passed());
  EXPECT_FALSE(rbb::check_binomial_bound(8, 128, 1.5).passed());
  EXPECT_THROW(rbb::check_binomial_bound(7, 20), std::invalid_argument);
  EXPECT_THROW(rbb::check_binomial_bound(8, 10'001), std::invalid_argument);
}

TEST(QuadraticChange, Cases) {
  EXPECT_TRUE(rbb::check_quadratic_change(LoadVector({9}), 100, RandomSource(1)).passed());
  const auto r = rbb::check_quadratic_change(InitialConfig::uniform().build(100, 1000), 100'000,
                                             RandomSource(2));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_THROW(rbb::check_quadratic_change(InitialConfig::single_bin().build(10, 100), 10,
                                           RandomSource(3)),
               std::invalid_argument);
}

// Gambler's ruin: P[hit 0 before k | start s] = 1 - s/k and E[tau] = s (k - s).
TEST(DriftWalk, SymmetricWalkClosedForm) {
  for (auto [s, k] : {std::pair{1, 2}, std::pair{3, 6}, std::pair{2, 7}}) {
    const auto est = rbb::estimate_drift_walk({1000, s, k, 1.0, WalkLaw::kSymmetric, 0}, 20'000,
                                              RandomSource(4, static_cast<std::uint64_t>(s)));
    const double ruin = 1.0 - static_cast<double>(s) / k;
    EXPECT_NEAR(est.hit_zero.mean, ruin, 3.0 * est.hit_zero.half_width + 1e-12);
    EXPECT_NEAR(est.exit_time.mean, static_cast<double>(s * (k - s)), 4.0 * est.exit_time.half_width);
  }
  EXPECT_TRUE(rbb::check_drift_lemmas({1000, 1, 2, 1.0, WalkLaw::kSymmetric, 0}, 10'000,
                                      RandomSource(5))
                  .passed());
}

TEST(DriftWalk, IdealizedSingleBin) {
  const rbb::DriftWalkConfig cfg{1000, 2, 4, std::exp(-2.0), WalkLaw::kIdealizedSingleBin, 10};
  const auto est = rbb::estimate_drift_walk(cfg, 10'000, RandomSource(6));
  EXPECT_LE(est.exit_time.mean, 5.0 * 4 / std::exp(-2.0));
  ASSERT_TRUE(est.upward_slack.has_value());
  EXPECT_TRUE(rbb::check_drift_lemmas(cfg, 10'000, RandomSource(6)).passed());
}

TEST(DriftWalk, BiasedWalkFailsAndGuards) {
  EXPECT_FALSE(rbb::check_drift_lemmas({1000, 3, 6, 1.0, WalkLaw::kBiasedUp, 0}, 10'000,
                                       RandomSource(7))
                   .passed());
  EXPECT_THROW(rbb::estimate_drift_walk({10, 3, 3, 1.0, WalkLaw::kSymmetric, 0}, 10, RandomSource(1)),
               std::invalid_argument);
  EXPECT_THROW(rbb::estimate_drift_walk({10, 1, 3, 0.0, WalkLaw::kSymmetric, 0}, 10, RandomSource(1)),
               std::invalid_argument);
}

TEST(OneChoice, HighProbabilityFrequencies) {
  const auto r = rbb::check_one_choice(1000, 1.0, 100, RandomSource(8));
  EXPECT_TRUE(r.passed()) << r.detail;
  EXPECT_GE(r.statistic, 0.95);
  EXPECT_THROW(rbb::check_one_choice(1000, 0.01, 10, RandomSource(8)), std::invalid_argument);
}

TEST(ChiSquare, SingleBinAndTwoBins) {
  const auto one = rbb::chi_square_step(LoadVector({3}), 1000, RandomSource(1));
  EXPECT_TRUE(one.passed());
  EXPECT_EQ(one.statistic, 0.0);
  EXPECT_TRUE(rbb::chi_square_step(LoadVector({2, 1}), 1'000'000, RandomSource(2)).passed());
}

TEST(ChiSquare, BiasedSamplerFails) {
  rbb::BiasedSampler s{RandomSource(3), 0.05};
  EXPECT_FALSE(rbb::chi_square_step_with(LoadVector({2, 1}), 100'000, s, 3).passed());
}

TEST(Reports, SameSeedSameVerdictAndStatistic) {
  const auto a = rbb::check_quadratic_drift(InitialConfig::uniform().build(30, 90), 5000, RandomSource(11));
  const auto b = rbb::check_quadratic_drift(InitialConfig::uniform().build(30, 90), 5000, RandomSource(11));
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.seed, 11u);
  EXPECT_NE(a.detail.find("samples=5000"), std::string::npos);
}
