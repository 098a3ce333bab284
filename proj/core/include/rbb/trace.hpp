#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rbb/load_vector.hpp"
#include "rbb/observables.hpp"
#include "rbb/process.hpp"
#include "rbb/random.hpp"

namespace rbb {

/// Which observables run_trace evaluates each round. Phi is evaluated (in
/// the log domain) iff alpha is set.
struct TraceObservers {
  bool empty = true;
  bool quadratic = true;
  bool max_load = true;
  std::optional<double> alpha;

  static TraceObservers all(double alpha) { return {true, true, true, alpha}; }
};

ObservationRow observe(const LoadVector& x, std::uint64_t round, const TraceObservers& observers);

/// Calls visit(round, state) for round 0 (the initial state) and after each
/// of `rounds` steps. The visitor sees a const view; it cannot alter the run.
template <BinSampler G, typename Visitor>
void simulate(ProcessKind kind, LoadVector& state, std::uint64_t rounds, G& rng, Visitor&& visit) {
  std::vector<std::size_t> draws;
  draws.reserve(state.n());
  const LoadVector& view = state;
  visit(std::uint64_t{0}, view);
  for (std::uint64_t t = 1; t <= rounds; ++t) {
    process_step_inplace(kind, state, rng, draws);
    visit(t, view);
  }
}

/// Runs `rounds` steps from init and returns rounds + 1 observation rows
/// (round 0 first). Throws std::invalid_argument if init does not fit (n, m).
std::vector<ObservationRow> run_trace(ProcessKind kind, std::size_t n, Load m,
                                      const InitialConfig& init, std::uint64_t rounds,
                                      RandomSource& rng, const TraceObservers& observers);

}  // namespace rbb
