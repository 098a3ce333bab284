#pragma once

// RBB with ball identities: every bin is a FIFO queue and only the ball at
// the front of a non-empty queue is re-allocated each round.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "rbb/load_vector.hpp"
#include "rbb/random.hpp"

namespace rbb {

using BallId = std::uint32_t;

enum class TieBreak { kByBallId, kRandom };

/// Order of same-round arrivals into one bin.
struct TieBreakPolicy {
  TieBreak kind = TieBreak::kByBallId;

  static TieBreakPolicy by_ball_id() { return {TieBreak::kByBallId}; }
  static TieBreakPolicy random() { return {TieBreak::kRandom}; }
};

/// Destination stream plus a separate stream for random tie-breaks, so the
/// tie policy never perturbs the load dynamics.
struct TraversalStreams {
  RandomSource destinations;
  RandomSource ties;

  explicit TraversalStreams(const RandomSource& base)
      : destinations(base), ties(base.substream(1)) {}
};

class QueueSystem {
 public:
  /// Balls get ids 0..m-1 in bin order: the first x_0 ids sit in bin 0
  /// (front first), the next x_1 in bin 1, and so on.
  static QueueSystem from_loads(const LoadVector& x);

  std::size_t n() const noexcept { return queues_.size(); }
  std::size_t m() const noexcept { return balls_; }
  const std::deque<BallId>& queue(std::size_t bin) const { return queues_.at(bin); }
  LoadVector loads() const;

  /// Every id in [0, m) appears exactly once across the queues.
  bool valid() const;

 private:
  friend struct TraversalStepper;
  std::vector<std::deque<BallId>> queues_;
  std::size_t balls_ = 0;
};

/// Per-ball visit bitsets and counters.
class CoverageTracker {
 public:
  /// Initial placement counts as a visit, so with n = 1 every ball is
  /// covered at round 0.
  static CoverageTracker start(const QueueSystem& q);

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return switches_.size(); }
  std::uint64_t round() const noexcept { return round_; }

  bool visited(BallId ball, std::size_t bin) const;
  std::size_t visited_count(BallId ball) const { return visited_count_.at(ball); }
  std::uint64_t switches(BallId ball) const { return switches_.at(ball); }
  std::uint64_t delays(BallId ball) const { return delays_.at(ball); }
  std::optional<std::uint64_t> cover_round(BallId ball) const { return cover_round_.at(ball); }
  /// switch count at the moment the ball became covered.
  std::optional<std::uint64_t> cover_switches(BallId ball) const { return cover_switches_.at(ball); }

  std::size_t covered_balls() const noexcept { return covered_; }
  bool all_covered() const noexcept { return covered_ == m(); }

 private:
  friend struct TraversalStepper;
  void visit(BallId ball, std::size_t bin);

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::uint64_t round_ = 0;
  std::size_t covered_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> visited_count_;
  std::vector<std::uint64_t> switches_;
  std::vector<std::uint64_t> delays_;
  std::vector<std::optional<std::uint64_t>> cover_round_;
  std::vector<std::optional<std::uint64_t>> cover_switches_;
};

/// One FIFO round. Front balls are moved in ascending source-bin order, so
/// the destination stream is consumed exactly as rbb_step consumes it.
/// `draws`, if given, receives the destinations in that order.
void traversal_step(QueueSystem& q, CoverageTracker& cov, TieBreakPolicy policy,
                    TraversalStreams& rng, std::vector<std::size_t>* draws = nullptr);

struct CoverResult {
  /// Absent for balls not covered within the cap.
  std::vector<std::optional<std::uint64_t>> cover_round;
  CoverageTracker tracker;
  std::uint64_t rounds_run = 0;
};

/// Steps until every ball has visited every bin or `cap` rounds elapse.
CoverResult cover_times(std::size_t n, Load m, const InitialConfig& init, TieBreakPolicy policy,
                        std::uint64_t cap, const RandomSource& rng);

struct SwitchSummary {
  std::vector<std::uint64_t> switches;
  std::vector<std::uint64_t> delays;
  std::vector<double> coverage;
  double mean_switches = 0.0;
  double mean_delays = 0.0;
  double mean_coverage = 0.0;
};

SwitchSummary switch_stats(const CoverageTracker& cov);

}  // namespace rbb
