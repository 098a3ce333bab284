#pragma once

// Experiment drivers behind the `rbb experiment` and `rbb traversal`
// subcommands. Every (n, m, rep) job owns the stream
// RandomSource(seed, stream_key(n, m, rep)), so results never depend on the
// thread count or on the order jobs run in.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rbb/load_vector.hpp"
#include "rbb/table.hpp"

namespace rbb {

enum class ExperimentKind { kMaxLoad, kEmptyFraction, kConvergence, kTraversal };

std::string to_string(ExperimentKind kind);
/// Accepts "max_load", "empty_fraction", "convergence", "traversal".
ExperimentKind parse_experiment(const std::string& name);

enum class AlphaPreset { kPaper, kPractical, kCustom };

struct AlphaChoice {
  AlphaPreset preset = AlphaPreset::kPractical;
  double value = 0.0;

  double resolve(std::size_t n, Load m) const;
  /// "paper", "practical", or a positive float.
  static AlphaChoice parse(const std::string& text);
};

struct ExperimentConfig {
  std::vector<std::size_t> n_list{100, 1000};
  /// m = multiplier * n (rounded to nearest).
  std::vector<double> m_multipliers{1, 10, 50};
  /// Absolute ball counts, used in addition to multipliers.
  std::vector<Load> m_absolute;
  std::uint64_t rounds = 100'000;
  std::uint64_t reps = 25;
  std::uint64_t seed = 42;
  std::optional<InitialConfig> init;
  AlphaChoice alpha;
  double threshold_factor = 1.5;
  /// Empty-fraction averaging starts here; defaults to rounds / 10.
  std::optional<std::uint64_t> burn_in;
  /// Traversal round cap; defaults to ceil(60 m ln m).
  std::optional<std::uint64_t> cap;
  unsigned threads = 1;

  /// Throws std::invalid_argument on reps < 1, threshold_factor <= 0,
  /// empty grids, or negative m.
  void validate() const;

  /// Sorted, de-duplicated (n, m) pairs.
  std::vector<std::pair<std::size_t, Load>> grid() const;

  /// Grid and run lengths of the published figures: n in {100, 1000, 10000},
  /// m in {n, 2n, ..., 50n}, 10^6 rounds.
  void apply_paper_scale(ExperimentKind kind);
};

struct MaxLoadRow {
  std::size_t n = 0;
  Load m = 0;
  std::uint64_t rounds = 0;
  std::uint64_t rep = 0;
  std::uint64_t seed = 0;
  Load max_load = 0;
  /// max / ((m/n) ln n); absent when n = 1 or m = 0.
  std::optional<double> normalized;
};

struct EmptyFractionRow {
  std::size_t n = 0;
  Load m = 0;
  std::uint64_t rounds = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t rep = 0;
  std::uint64_t seed = 0;
  double mean_f = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct ConvergenceRow {
  std::size_t n = 0;
  Load m = 0;
  double threshold = 0.0;
  std::uint64_t rep = 0;
  std::uint64_t seed = 0;
  /// First round with max load <= threshold; absent if the cap was hit.
  std::optional<std::uint64_t> rounds_to_converge;
  bool capped = false;
};

struct TraversalRow {
  std::size_t n = 0;
  Load m = 0;
  std::uint64_t rep = 0;
  std::uint64_t seed = 0;
  /// Round by which every ball was covered; absent unless all were.
  std::optional<std::uint64_t> max_cover;
  /// Earliest per-ball cover round among covered balls.
  std::optional<std::uint64_t> min_cover;
  double covered_fraction = 0.0;
};

std::vector<MaxLoadRow> experiment_max_load(const ExperimentConfig& cfg);
/// Throws std::invalid_argument when rounds <= burn_in.
std::vector<EmptyFractionRow> experiment_empty_fraction(const ExperimentConfig& cfg);
std::vector<ConvergenceRow> experiment_convergence(const ExperimentConfig& cfg);
std::vector<TraversalRow> experiment_traversal(const ExperimentConfig& cfg);

ResultTable to_table(const std::vector<MaxLoadRow>& rows);
ResultTable to_table(const std::vector<EmptyFractionRow>& rows);
ResultTable to_table(const std::vector<ConvergenceRow>& rows);
ResultTable to_table(const std::vector<TraversalRow>& rows);

/// Runs the experiment and returns its table.
ResultTable run_experiment(ExperimentKind kind, const ExperimentConfig& cfg);

/// Per-(n, m) mean of the experiment's measured column over the reps that
/// have a value. Columns: n,m,reps,measured,mean.
ResultTable summarize(const ResultTable& table);

/// Calls job(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

}  // namespace rbb
