#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "rbb/process.hpp"

using rbb::Load;
using rbb::LoadVector;
using rbb::RandomSource;

namespace {

// Replays a fixed list of destinations.
struct Scripted {
  std::vector<std::uint64_t> script;
  std::size_t pos = 0;
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t v = script.at(pos++);
    EXPECT_LT(v, bound);
    return v;
  }
};

// Runs `step` once for every destination tuple of length `draws` over n bins
// and tallies the successors. Independent of the exact oracle.
template <typename Step>
std::map<std::vector<Load>, int> enumerate(std::size_t n, std::size_t draws, Step step) {
  std::map<std::vector<Load>, int> out;
  std::vector<std::uint64_t> tuple(draws, 0);
  for (;;) {
    Scripted s{tuple};
    const LoadVector next = step(s);
    ++out[{next.loads().begin(), next.loads().end()}];
    std::size_t i = 0;
    while (i < draws && ++tuple[i] == n) tuple[i++] = 0;
    if (i == draws) break;
  }
  return out;
}

}  // namespace

TEST(RbbStep, SingleBinIsFixed) {
  RandomSource g(1);
  auto [next, batch] = rbb::rbb_step(LoadVector({5}), g);
  EXPECT_EQ(next, LoadVector({5}));
  EXPECT_EQ(batch.destinations.size(), 1u);
}

TEST(RbbStep, TwoBinsOneBallHalfHalf) {
  auto out = enumerate(2, 1, [](Scripted& s) { return rbb::rbb_step(LoadVector({2, 0}), s).first; });
  EXPECT_EQ(out.size(), 2u);
  EXPECT_EQ((out[{2, 0}]), 1);
  EXPECT_EQ((out[{1, 1}]), 1);
}

TEST(RbbStep, FigureOneExampleMovesOneBallPerNonemptyBin) {
  RandomSource g(2);
  const LoadVector x({2, 3, 0, 1, 2, 0});
  auto [next, batch] = rbb::rbb_step(x, g);
  EXPECT_EQ(batch.destinations.size(), 4u);
  EXPECT_EQ(next.m(), 8);
}

TEST(RbbStep, DrawOrderFollowsNonemptyBins) {
  // Bins 0 and 2 are non-empty; draw 0 belongs to bin 0, draw 1 to bin 2.
  Scripted s{{2, 1}};
  std::vector<std::size_t> draws;
  LoadVector x({1, 0, 1});
  EXPECT_EQ(rbb::rbb_step_inplace(x, s, draws), 2u);
  EXPECT_EQ(x, LoadVector({0, 1, 1}));
  EXPECT_EQ(draws, (std::vector<std::size_t>{2, 1}));
}

TEST(RbbStep, ConservationAndNonNegativity) {
  RandomSource g(3);
  std::vector<std::size_t> draws;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + g.below(40);
    const Load m = static_cast<Load>(g.below(200));
    LoadVector x = rbb::one_choice_run(n, m, g);
    for (int t = 0; t < 200; ++t) {
      rbb::rbb_step_inplace(x, g, draws);
      ASSERT_EQ(std::accumulate(x.loads().begin(), x.loads().end(), Load{0}), m);
      ASSERT_EQ(x.m(), m);
      for (Load v : x.loads()) ASSERT_GE(v, 0);
    }
  }
}

TEST(IdealizedStep, SingleBin) {
  RandomSource g(1);
  EXPECT_EQ(rbb::idealized_step(LoadVector({3}), g).first, LoadVector({3}));
}

TEST(IdealizedStep, GrowsByEmptyCountAndMatchesEnumeration) {
  auto from10 = enumerate(2, 2, [](Scripted& s) { return rbb::idealized_step(LoadVector({1, 0}), s).first; });
  EXPECT_EQ((from10[{2, 0}]), 1);
  EXPECT_EQ((from10[{1, 1}]), 2);
  EXPECT_EQ((from10[{0, 2}]), 1);
  auto from11 = enumerate(2, 2, [](Scripted& s) { return rbb::idealized_step(LoadVector({1, 1}), s).first; });
  EXPECT_EQ((from11[{2, 0}]), 1);
  EXPECT_EQ((from11[{1, 1}]), 2);
  EXPECT_EQ((from11[{0, 2}]), 1);
  RandomSource g(4);
  auto [y, batch] = rbb::idealized_step(LoadVector({1, 0}), g);
  EXPECT_EQ(y.m(), 2);
  EXPECT_EQ(batch.destinations.size(), 2u);
}

TEST(CoupledStep, EqualStartKeepsDominance) {
  RandomSource g(5);
  const LoadVector x({3, 0, 1, 0});
  auto [x1, y1] = rbb::coupled_step(x, x, g);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LE(x1[i], y1[i]);
  EXPECT_EQ(y1.m() - x1.m(), static_cast<Load>(x.empty_bins()));
}

TEST(CoupledStep, SingleBin) {
  RandomSource g(6);
  auto [x1, y1] = rbb::coupled_step(LoadVector({1}), LoadVector({4}), g);
  EXPECT_EQ(x1, LoadVector({1}));
  EXPECT_EQ(y1, LoadVector({4}));
}

TEST(CoupledStep, RejectsViolatedInput) {
  RandomSource g(7);
  EXPECT_THROW(rbb::coupled_step(LoadVector({2, 0}), LoadVector({1, 1}), g), std::invalid_argument);
}

TEST(CoupledStep, ExhaustiveFromEqualTwoBins) {
  // Every shared 2-sample outcome from x = y = (1,1) and (2,0) keeps x <= y.
  for (const LoadVector start : {LoadVector({1, 1}), LoadVector({2, 0})}) {
    for (std::uint64_t a = 0; a < 2; ++a) {
      for (std::uint64_t b = 0; b < 2; ++b) {
        Scripted s{{a, b}};
        auto [x1, y1] = rbb::coupled_step(start, start, s);
        EXPECT_LE(x1[0], y1[0]);
        EXPECT_LE(x1[1], y1[1]);
      }
    }
  }
}

TEST(CoupledStep, RandomSweepNoViolations) {
  RandomSource g(8);
  std::vector<std::size_t> draws;
  for (int rep = 0; rep < 100; ++rep) {
    LoadVector x = rbb::one_choice_run(8, static_cast<Load>(g.below(17)), g);
    std::vector<Load> extra(x.loads().begin(), x.loads().end());
    for (auto& v : extra) v += static_cast<Load>(g.below(3));
    LoadVector y(extra);
    for (int t = 0; t < 100; ++t) {
      rbb::coupled_step_inplace(x, y, g, draws);
      for (std::size_t i = 0; i < 8; ++i) ASSERT_LE(x[i], y[i]);
    }
  }
}

TEST(CoupledStep, RbbMarginalUsesPrefix) {
  // x alone with the same first kappa draws lands where the coupled x lands.
  Scripted coupled{{1, 0, 2}};
  Scripted alone{{1, 0}};
  auto [x1, y1] = rbb::coupled_step(LoadVector({1, 0, 1}), LoadVector({1, 1, 1}), coupled);
  auto [x2, batch] = rbb::rbb_step(LoadVector({1, 0, 1}), alone);
  EXPECT_EQ(x1, x2);
  (void)y1;
  (void)batch;
}

TEST(OneChoice, Basics) {
  RandomSource g(9);
  EXPECT_EQ(rbb::one_choice_run(4, 0, g), LoadVector::zeros(4));
  int first = 0;
  for (int i = 0; i < 20'000; ++i) first += rbb::one_choice_run(2, 1, g)[0];
  EXPECT_NEAR(first / 20'000.0, 0.5, 0.015);
  const LoadVector x = rbb::one_choice_run(10, 100, g);
  EXPECT_EQ(x.m(), 100);
}
