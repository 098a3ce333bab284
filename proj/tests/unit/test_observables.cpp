#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "rbb/observables.hpp"
#include "rbb/trace.hpp"

using rbb::Load;
using rbb::LoadVector;

TEST(EmptyStats, Definitions) {
  const auto s = rbb::empty_stats(LoadVector({0, 3, 0, 1}));
  EXPECT_EQ(s.empty, 2u);
  EXPECT_EQ(s.nonempty, 2u);
  EXPECT_DOUBLE_EQ(s.fraction(), 0.5);
  EXPECT_EQ(rbb::empty_stats(LoadVector::zeros(5)).empty, 5u);
  EXPECT_EQ(rbb::empty_stats(LoadVector({1, 1, 1})).empty, 0u);
}

TEST(QuadraticPotential, Values) {
  EXPECT_EQ(rbb::quadratic_potential(LoadVector::zeros(3)), 0u);
  EXPECT_EQ(rbb::quadratic_potential(LoadVector({2, 1, 1})), 6u);
  EXPECT_EQ(rbb::quadratic_potential(LoadVector({7, 0, 0})), 49u);
  // Largest supported total still fits.
  const std::uint64_t big = static_cast<std::uint64_t>(rbb::kMaxBalls);
  EXPECT_EQ(rbb::quadratic_potential(LoadVector({rbb::kMaxBalls})), big * big);
}

TEST(ExponentialPotential, Values) {
  using rbb::PotentialMode;
  EXPECT_NEAR(rbb::exponential_potential(LoadVector({1, 1}), std::log(2.0), PotentialMode::kLinear),
              4.0, 1e-12);
  EXPECT_NEAR(rbb::exponential_potential(LoadVector({3, 1, 0}), 1e-9, PotentialMode::kLinear), 3.0,
              1e-6);
  const double a = 0.3;
  const LoadVector single({10, 0, 0, 0});
  EXPECT_NEAR(rbb::exponential_potential(single, a, PotentialMode::kLinear), std::exp(3.0) + 3,
              1e-9);
  EXPECT_NEAR(rbb::log_exponential_potential(single, a), std::log(std::exp(3.0) + 3), 1e-12);
}

TEST(ExponentialPotential, LogDomainSurvivesHugeExponents) {
  const LoadVector x({100000, 0});
  const double alpha = 1.0;
  EXPECT_THROW(rbb::exponential_potential(x, alpha, rbb::PotentialMode::kLinear),
               std::overflow_error);
  // ln(e^100000 + 1) = 100000 to double precision.
  EXPECT_DOUBLE_EQ(rbb::log_exponential_potential(x, alpha), 100000.0);
}

TEST(QuadraticDriftBound, Arithmetic) {
  EXPECT_DOUBLE_EQ(rbb::quadratic_drift_bound(2, 2, 2, 0), 6.0);
  const Load m = 10;
  const std::size_t n = 4;
  EXPECT_DOUBLE_EQ(rbb::quadratic_drift_bound(100, m, n, n), 100.0 - 2.0 * 10 + 8);
}

TEST(ExponentialDriftBound, Arithmetic) {
  const double a = 0.1;
  const double phi = std::exp(0.2) + 1.0;
  const double g = std::exp((std::exp(a) - 1.0) / 2.0);
  EXPECT_NEAR(rbb::exponential_drift_bound(phi, a, 2, 1), phi * std::exp(-a) * g + 1.0 * g, 1e-12);
  // kappa = 0: Phi e^{-alpha} + n.
  EXPECT_NEAR(rbb::exponential_drift_bound(3.0, a, 3, 0), 3.0 * std::exp(-a) + 3.0, 1e-12);
  EXPECT_NEAR(rbb::log_exponential_drift_bound(std::log(phi), a, 2, 1),
              std::log(rbb::exponential_drift_bound(phi, a, 2, 1)), 1e-12);
  // alpha -> 0: bound -> Phi + (n - kappa).
  EXPECT_NEAR(rbb::exponential_drift_bound(5.0, 1e-10, 5, 3), 7.0, 1e-6);
}

TEST(PotentialParams, AnalyticConstants) {
  const auto p = rbb::default_params(100, 100);
  EXPECT_NEAR(p.alpha, 1.0 / 571392.0, 1e-18);
  EXPECT_DOUBLE_EQ(p.c_r, 16.0 * 147456.0 * 553536.0);
  EXPECT_DOUBLE_EQ(rbb::default_params(10, 10, 3).c_s, 24.0 * p.c_r);
  EXPECT_DOUBLE_EQ(rbb::default_params(100, 400).gamma, 1.0 / 16.0);
  EXPECT_THROW(rbb::default_params(0, 1), std::invalid_argument);
}

TEST(PotentialParams, PracticalThreshold) {
  const auto p = rbb::practical_params(100, 400);
  EXPECT_DOUBLE_EQ(p.alpha, 1.0 / 32.0);
  EXPECT_DOUBLE_EQ(p.threshold, 48.0 * 1024.0 * 100.0);
  EXPECT_NEAR(p.log_threshold(), std::log(p.threshold), 1e-12);
}

TEST(MaxLoadCertificate, BoundsTheMaximum) {
  const LoadVector x({9, 2, 0, 4});
  for (double a : {0.01, 0.5, 2.0}) {
    EXPECT_GE(rbb::max_load_certificate(rbb::log_exponential_potential(x, a), a), 9.0);
  }
}

namespace {

std::vector<rbb::ObservationRow> trace(std::size_t n, Load m, rbb::InitialConfig init,
                                       std::uint64_t rounds, double alpha, std::uint64_t seed = 1) {
  rbb::RandomSource g(seed);
  return rbb::run_trace(rbb::ProcessKind::kRbb, n, m, init, rounds, g,
                        rbb::TraceObservers::all(alpha));
}

}  // namespace

TEST(AdjustedSeries, FirstValueIsPhi) {
  const auto p = rbb::default_params(20, 100).with_alpha(0.2);
  const auto rows = trace(20, 100, rbb::InitialConfig::single_bin(), 50, p.alpha);
  const auto s = rbb::adjusted_potential_series(rows, 0, p);
  EXPECT_NEAR(s.log_values[0], rows[0].exponential->log_phi, 1e-12);
  EXPECT_FALSE(s.stopped[0]);
}

TEST(AdjustedSeries, MatchesDirectFormula) {
  const auto p = rbb::default_params(20, 100).with_alpha(0.2);
  const auto rows = trace(20, 100, rbb::InitialConfig::single_bin(), 30, p.alpha, 3);
  const std::uint64_t t0 = 2;
  const auto s = rbb::adjusted_potential_series(rows, t0, p);
  double weight = 0.0;
  bool dead = false;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto& row = rows[t0 + j];
    if (dead) {
      EXPECT_TRUE(s.stopped[j]);
      EXPECT_EQ(s.value(j), 0.0);
    } else {
      EXPECT_NEAR(s.log_values[j], row.exponential->log_phi + weight, 1e-9) << j;
    }
    weight += p.alpha * row.empty->fraction() - 1.5 * p.alpha * p.alpha;
    if (row.exponential->log_phi <= p.log_threshold()) dead = true;
  }
}

TEST(AdjustedSeries, StoppedAtStartZeroesTheRest) {
  // Practical alpha at n=20, m=100: Phi starts below the threshold.
  const auto p = rbb::practical_params(20, 100);
  const auto rows = trace(20, 100, rbb::InitialConfig::single_bin(), 10, p.alpha);
  ASSERT_LE(rows[0].exponential->log_phi, p.log_threshold());
  const auto s = rbb::adjusted_potential_series(rows, 0, p);
  ASSERT_TRUE(s.stop_round.has_value());
  EXPECT_EQ(*s.stop_round, 0u);
  EXPECT_GT(s.value(0), 0.0);
  for (std::size_t j = 1; j < s.size(); ++j) EXPECT_EQ(s.value(j), 0.0);
}

TEST(AdjustedSeries, RejectsAlphaMismatch) {
  const auto rows = trace(10, 20, rbb::InitialConfig::uniform(), 5, 0.3);
  EXPECT_THROW(rbb::adjusted_potential_series(rows, 0, rbb::default_params(10, 20).with_alpha(0.4)),
               std::invalid_argument);
  EXPECT_THROW(rbb::adjusted_potential_series(rows, 99, rbb::default_params(10, 20).with_alpha(0.3)),
               std::out_of_range);
}

TEST(AggregateEmpty, Sums) {
  const auto rows = trace(6, 4, rbb::InitialConfig::uniform(), 20, 0.1);
  EXPECT_EQ(rbb::aggregate_empty(rows, 5, 5), rows[5].empty->empty);
  std::uint64_t sum = 0;
  for (int t = 3; t <= 12; ++t) sum += rows[t].empty->empty;
  EXPECT_EQ(rbb::aggregate_empty(rows, 3, 12), sum);
  const auto zero = trace(4, 0, rbb::InitialConfig::uniform(), 9, 0.1);
  EXPECT_EQ(rbb::aggregate_empty(zero, 2, 8), 4u * 7u);
  EXPECT_THROW(rbb::aggregate_empty(rows, 4, 3), std::out_of_range);
  EXPECT_THROW(rbb::aggregate_empty(rows, 0, 21), std::out_of_range);
}
