#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <vector>

#include "rbb/random.hpp"
#include "rbb/stats.hpp"

TEST(RunningStats, MeanAndVariance) {
  rbb::RunningStats s;
  for (double x : {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) s.add(x);
  EXPECT_DOUBLE_EQ(s.mean(), 5.0);
  EXPECT_NEAR(s.variance(), 32.0 / 7.0, 1e-12);
  EXPECT_NEAR(s.standard_error(), std::sqrt(32.0 / 7.0 / 8.0), 1e-12);
}

TEST(NormalQuantile, KnownValues) {
  EXPECT_NEAR(rbb::normal_quantile(0.95), 1.959963985, 1e-8);
  EXPECT_NEAR(rbb::normal_quantile(0.99), 2.575829304, 1e-8);
}

TEST(ProportionInterval, ClampedAndCentered) {
  const auto all = rbb::proportion_interval(100, 100);
  EXPECT_LE(all.upper(), 1.0);
  EXPECT_GE(all.lower(), 0.0);
  const auto none = rbb::proportion_interval(0, 50);
  EXPECT_GE(none.lower(), 0.0);
  const auto half = rbb::proportion_interval(500, 1000);
  EXPECT_NEAR(half.mean, 0.5, 1e-12);
  EXPECT_NEAR(half.half_width, 1.96 * std::sqrt(0.25 / 1000), 1e-3);
}

TEST(MeanInterval, CoversTrueMean) {
  rbb::RandomSource g(1);
  int covered = 0;
  for (int rep = 0; rep < 400; ++rep) {
    rbb::RunningStats s;
    for (int i = 0; i < 200; ++i) s.add(g.uniform01());
    const auto ci = rbb::mean_interval(s, 0.95);
    covered += ci.lower() <= 0.5 && 0.5 <= ci.upper();
  }
  // Binomial(400, 0.95): sd ~ 4.4.
  EXPECT_GE(covered, 360);
}

TEST(BatchMeans, IidSeriesMatchesPlainInterval) {
  rbb::RandomSource g(2);
  std::vector<double> xs(100'000);
  for (auto& x : xs) x = g.uniform01();
  const auto ci = rbb::batch_means_interval(xs);
  EXPECT_NEAR(ci.mean, 0.5, 0.005);
  EXPECT_NEAR(ci.half_width, 1.96 * std::sqrt(1.0 / 12 / 100'000), 0.001);
  EXPECT_EQ(ci.samples, 100'000u);
}

TEST(ChiSquare, MatchesBoost) {
  for (std::uint64_t df : {1u, 3u, 10u, 57u}) {
    boost::math::chi_squared d(static_cast<double>(df));
    for (double x : {0.5, 2.0, 10.0, 40.0}) {
      EXPECT_NEAR(rbb::chi_square_sf(x, df), boost::math::cdf(boost::math::complement(d, x)), 1e-12);
    }
    EXPECT_NEAR(rbb::chi_square_sf(rbb::chi_square_critical(df, 0.001), df), 0.001, 1e-10);
  }
  EXPECT_EQ(rbb::chi_square_sf(3.0, 0), 1.0);
  EXPECT_EQ(rbb::chi_square_critical(0, 0.001), 0.0);
}
