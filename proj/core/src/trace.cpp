#include "rbb/trace.hpp"

namespace rbb {

ObservationRow observe(const LoadVector& x, std::uint64_t round, const TraceObservers& observers) {
  ObservationRow row;
  row.round = round;
  row.balls = x.m();
  if (observers.empty) row.empty = empty_stats(x);
  if (observers.quadratic) row.quadratic = quadratic_potential(x);
  if (observers.max_load) row.max_load = x.max_load();
  if (observers.alpha) {
    row.exponential = ExponentialObs{*observers.alpha, log_exponential_potential(x, *observers.alpha)};
  }
  return row;
}

std::vector<ObservationRow> run_trace(ProcessKind kind, std::size_t n, Load m,
                                      const InitialConfig& init, std::uint64_t rounds,
                                      RandomSource& rng, const TraceObservers& observers) {
  LoadVector state = init.build(n, m);
  std::vector<ObservationRow> rows;
  rows.reserve(static_cast<std::size_t>(rounds) + 1);
  simulate(kind, state, rounds, rng, [&](std::uint64_t t, const LoadVector& x) {
    rows.push_back(observe(x, t, observers));
  });
  return rows;
}

}  // namespace rbb
