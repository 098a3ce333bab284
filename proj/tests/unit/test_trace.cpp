#include <gtest/gtest.h>

#include "rbb/trace.hpp"

using rbb::InitialConfig;
using rbb::ProcessKind;
using rbb::RandomSource;

TEST(RunTrace, ZeroRoundsGivesInitialRow) {
  RandomSource g(1);
  const auto rows = rbb::run_trace(ProcessKind::kRbb, 4, 9, InitialConfig::uniform(), 0, g,
                                   rbb::TraceObservers::all(0.1));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].round, 0u);
  EXPECT_EQ(rows[0].balls, 9);
  EXPECT_EQ(*rows[0].max_load, 3);
  EXPECT_EQ(*rows[0].quadratic, 9u + 4u + 4u + 4u);
  EXPECT_EQ(rows[0].empty->empty, 0u);
}

TEST(RunTrace, SameSeedSameRows) {
  RandomSource a(77), b(77);
  const auto obs = rbb::TraceObservers::all(0.05);
  const auto ra = rbb::run_trace(ProcessKind::kRbb, 30, 90, InitialConfig::single_bin(), 500, a, obs);
  const auto rb = rbb::run_trace(ProcessKind::kRbb, 30, 90, InitialConfig::single_bin(), 500, b, obs);
  EXPECT_EQ(ra, rb);
}

TEST(RunTrace, ObserverSelection) {
  RandomSource g(2);
  const auto rows = rbb::run_trace(ProcessKind::kRbb, 5, 5, InitialConfig::uniform(), 3, g,
                                   rbb::TraceObservers{true, false, false, std::nullopt});
  for (const auto& r : rows) {
    EXPECT_TRUE(r.empty.has_value());
    EXPECT_FALSE(r.quadratic.has_value());
    EXPECT_FALSE(r.exponential.has_value());
    EXPECT_FALSE(r.max_load.has_value());
  }
}

TEST(RunTrace, IdealizedGrows) {
  RandomSource g(3);
  const auto rows = rbb::run_trace(ProcessKind::kIdealized, 10, 2, InitialConfig::uniform(), 20, g,
                                   rbb::TraceObservers{});
  for (std::size_t t = 1; t < rows.size(); ++t) {
    EXPECT_EQ(rows[t].balls, rows[t - 1].balls + static_cast<rbb::Load>(rows[t - 1].empty->empty));
  }
}

// Exact stationary law for n=2, m=2 is (1/4, 1/2, 1/4), so E[F] = 1/2.
TEST(RunTrace, TwoBinsTwoBallsTimeAverage) {
  RandomSource g(4);
  rbb::LoadVector x = InitialConfig::uniform().build(2, 2);
  std::uint64_t total_empty = 0;
  constexpr std::uint64_t kRounds = 1'000'000;
  rbb::simulate(ProcessKind::kRbb, x, kRounds, g, [&](std::uint64_t t, const rbb::LoadVector& s) {
    if (t > 0) total_empty += s.empty_bins();
  });
  EXPECT_NEAR(static_cast<double>(total_empty) / kRounds, 0.5, 0.01);
}

TEST(Simulate, VisitsEveryRound) {
  RandomSource g(5);
  rbb::LoadVector x = InitialConfig::uniform().build(3, 3);
  std::uint64_t last = 0, calls = 0;
  rbb::simulate(ProcessKind::kRbb, x, 7, g, [&](std::uint64_t t, const rbb::LoadVector&) {
    last = t;
    ++calls;
  });
  EXPECT_EQ(calls, 8u);
  EXPECT_EQ(last, 7u);
}
