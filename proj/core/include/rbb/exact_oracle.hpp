#pragma once

// Brute-force ground truth for tiny instances of the RBB chain.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rbb/load_vector.hpp"

namespace rbb {

inline constexpr std::size_t kDefaultStateCap = 1'000'000;
inline constexpr std::uint64_t kDefaultTupleCap = 10'000'000;

/// Colexicographic order: compare the last bin first.
bool colex_less(const LoadVector& a, const LoadVector& b) noexcept;

/// All compositions of m into n non-negative parts, in colex order.
struct StateSpace {
  std::size_t n = 0;
  Load m = 0;
  std::vector<LoadVector> states;
  std::map<std::vector<Load>, std::size_t> index;

  std::size_t size() const noexcept { return states.size(); }
  /// Throws std::out_of_range for vectors outside the space.
  std::size_t index_of(const LoadVector& x) const;
};

/// C(m + n - 1, n - 1), saturating at UINT64_MAX.
std::uint64_t composition_count(std::size_t n, Load m) noexcept;

/// Throws std::length_error when the space exceeds `cap` states.
StateSpace enumerate_states(std::size_t n, Load m, std::size_t cap = kDefaultStateCap);

struct Outcome {
  LoadVector state;
  std::uint64_t count = 0;
  double probability = 0.0;
};

/// Exact successor law: counts over all n^kappa destination tuples, divided
/// once by the tuple total. Outcomes are sorted in colex order.
struct Distribution {
  std::vector<Outcome> outcomes;
  std::uint64_t tuples = 0;

  double probability_of(const LoadVector& x) const noexcept;
  double total_probability() const noexcept;
};

/// Throws std::length_error when n^kappa exceeds `cap`.
Distribution one_step_distribution(const LoadVector& x, std::uint64_t cap = kDefaultTupleCap);

struct TransitionKernel {
  StateSpace space;
  /// Sparse rows: (successor index, probability), sorted by index.
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
};

TransitionKernel transition_kernel(const StateSpace& space, std::uint64_t cap = kDefaultTupleCap);

/// Indices reachable from `start` (including it), ascending.
std::vector<std::size_t> reachable_states(const TransitionKernel& kernel, std::size_t start);

enum class StationaryMethod { kPowerIteration, kDenseSolve };

struct StationaryOptions {
  double tol = 1e-12;
  std::size_t max_iterations = 1'000'000;
  StationaryMethod method = StationaryMethod::kPowerIteration;
  /// Start state for the reachability scan; defaults to the uniform config.
  std::optional<LoadVector> start;
};

struct StationaryResult {
  /// Indexed like kernel.space.states; zero outside the reachable class.
  std::vector<double> pi;
  std::vector<std::size_t> reachable;
  std::size_t iterations = 0;
  /// ||pi P - pi||_1 at exit.
  double residual = 0.0;
};

/// Power iteration on the lazy chain (pi + pi P) / 2, which has the same
/// stationary law and cannot cycle; or a dense LU solve for up to 2000
/// reachable states. Throws std::runtime_error on non-convergence.
StationaryResult stationary_distribution(const TransitionKernel& kernel,
                                         const StationaryOptions& options = {});

enum class ObservableKind { kEmpty, kQuadratic, kExponential, kMaxLoad };

struct ObservableSelector {
  ObservableKind kind = ObservableKind::kEmpty;
  double alpha = 0.0;

  double operator()(const LoadVector& x) const;
};

double expected_observable(const Distribution& dist, const ObservableSelector& g);
double expected_observable(const StateSpace& space, const std::vector<double>& pi,
                           const ObservableSelector& g);

}  // namespace rbb
