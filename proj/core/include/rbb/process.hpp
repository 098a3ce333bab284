#pragma once

// Step kernels for the repeated balls-into-bins process, the idealized
// process that always throws n balls, their shared-sample coupling, and the
// OneChoice baseline.
//
// Draw order is fixed: non-empty bins are scanned in ascending index and the
// j-th draw belongs to the j-th non-empty bin. The coupling relies on this to
// hand the RBB copy a prefix of the idealized copy's samples.

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rbb/load_vector.hpp"
#include "rbb/random.hpp"

namespace rbb {

enum class ProcessKind { kRbb, kIdealized };

/// One RBB round in place. Removals and arrivals are simultaneous.
/// `draws` receives the destinations; returns kappa (number of draws).
template <BinSampler G>
std::size_t rbb_step_inplace(LoadVector& x, G& rng, std::vector<std::size_t>& draws) {
  auto& loads = x.mutable_loads();
  const std::size_t n = loads.size();
  draws.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (loads[i] > 0) {
      draws.push_back(static_cast<std::size_t>(rng.below(n)));
      --loads[i];
    }
  }
  for (std::size_t d : draws) ++loads[d];
  return draws.size();
}

/// One round of the idealized process in place: every non-empty bin loses a
/// ball and exactly n balls are thrown. The total grows by the number of
/// empty bins.
template <BinSampler G>
std::size_t idealized_step_inplace(LoadVector& y, G& rng, std::vector<std::size_t>& draws) {
  auto& loads = y.mutable_loads();
  const std::size_t n = loads.size();
  draws.resize(n);
  for (std::size_t j = 0; j < n; ++j) draws[j] = static_cast<std::size_t>(rng.below(n));
  std::size_t kappa = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (loads[i] > 0) {
      --loads[i];
      ++kappa;
    }
  }
  for (std::size_t d : draws) ++loads[d];
  const Load grown = y.m() + static_cast<Load>(n - kappa);
  if (grown > kMaxBalls) throw std::overflow_error("idealized_step: ball count exceeds cap");
  y.set_total(grown);
  return kappa;
}

/// Coupled round: one batch of n samples drives the idealized copy y, and
/// its first kappa(x) samples drive the RBB copy x. Preserves x <= y
/// coordinate-wise. Throws std::invalid_argument if x <= y fails on input.
template <BinSampler G>
void coupled_step_inplace(LoadVector& x, LoadVector& y, G& rng, std::vector<std::size_t>& draws) {
  if (x.n() != y.n()) throw std::invalid_argument("coupled_step: bin counts differ");
  auto& xl = x.mutable_loads();
  auto& yl = y.mutable_loads();
  const std::size_t n = xl.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (xl[i] > yl[i]) {
      throw std::invalid_argument("coupled_step: dominance x_i <= y_i violated at bin " +
                                  std::to_string(i));
    }
  }
  draws.resize(n);
  for (std::size_t j = 0; j < n; ++j) draws[j] = static_cast<std::size_t>(rng.below(n));

  std::size_t kappa_x = 0;
  std::size_t kappa_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (xl[i] > 0) {
      --xl[i];
      ++kappa_x;
    }
    if (yl[i] > 0) {
      --yl[i];
      ++kappa_y;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    ++yl[draws[j]];
    if (j < kappa_x) ++xl[draws[j]];
  }
  const Load grown = y.m() + static_cast<Load>(n - kappa_y);
  if (grown > kMaxBalls) throw std::overflow_error("coupled_step: ball count exceeds cap");
  y.set_total(grown);
}

template <BinSampler G>
std::pair<LoadVector, SampleBatch> rbb_step(const LoadVector& state, G& rng,
                                            std::uint64_t round = 0) {
  std::pair<LoadVector, SampleBatch> out{state, SampleBatch{{}, round}};
  rbb_step_inplace(out.first, rng, out.second.destinations);
  return out;
}

template <BinSampler G>
std::pair<LoadVector, SampleBatch> idealized_step(const LoadVector& state, G& rng,
                                                  std::uint64_t round = 0) {
  std::pair<LoadVector, SampleBatch> out{state, SampleBatch{{}, round}};
  idealized_step_inplace(out.first, rng, out.second.destinations);
  return out;
}

template <BinSampler G>
std::pair<LoadVector, LoadVector> coupled_step(const LoadVector& x, const LoadVector& y, G& rng) {
  std::pair<LoadVector, LoadVector> out{x, y};
  std::vector<std::size_t> draws;
  coupled_step_inplace(out.first, out.second, rng, draws);
  return out;
}

template <BinSampler G>
void process_step_inplace(ProcessKind kind, LoadVector& state, G& rng,
                          std::vector<std::size_t>& draws) {
  if (kind == ProcessKind::kRbb) {
    rbb_step_inplace(state, rng, draws);
  } else {
    idealized_step_inplace(state, rng, draws);
  }
}

/// OneChoice: `balls` balls, each to an independent uniform bin, from empty.
template <BinSampler G>
LoadVector one_choice_run(std::size_t n, Load balls, G& rng) {
  if (n == 0) throw std::invalid_argument("one_choice_run: n must be positive");
  if (balls < 0 || balls > kMaxBalls) throw std::invalid_argument("one_choice_run: bad ball count");
  LoadVector x = LoadVector::zeros(n);
  auto& loads = x.mutable_loads();
  for (Load b = 0; b < balls; ++b) ++loads[static_cast<std::size_t>(rng.below(n))];
  x.set_total(balls);
  return x;
}

}  // namespace rbb
