#include "rbb/traversal.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace rbb {

QueueSystem QueueSystem::from_loads(const LoadVector& x) {
  if (x.m() > static_cast<Load>(UINT32_MAX)) {
    throw std::invalid_argument("QueueSystem: too many balls for 32-bit ids");
  }
  QueueSystem q;
  q.queues_.resize(x.n());
  BallId next = 0;
  for (std::size_t i = 0; i < x.n(); ++i) {
    for (Load k = 0; k < x[i]; ++k) q.queues_[i].push_back(next++);
  }
  q.balls_ = next;
  return q;
}

LoadVector QueueSystem::loads() const {
  std::vector<Load> out(queues_.size());
  for (std::size_t i = 0; i < queues_.size(); ++i) out[i] = static_cast<Load>(queues_[i].size());
  return LoadVector(std::move(out));
}

bool QueueSystem::valid() const {
  std::vector<bool> seen(balls_, false);
  std::size_t total = 0;
  for (const auto& queue : queues_) {
    for (BallId b : queue) {
      if (b >= balls_ || seen[b]) return false;
      seen[b] = true;
      ++total;
    }
  }
  return total == balls_;
}

CoverageTracker CoverageTracker::start(const QueueSystem& q) {
  CoverageTracker cov;
  const std::size_t m = q.m();
  cov.n_ = q.n();
  cov.words_ = (cov.n_ + 63) / 64;
  cov.bits_.assign(m * cov.words_, 0);
  cov.visited_count_.assign(m, 0);
  cov.switches_.assign(m, 0);
  cov.delays_.assign(m, 0);
  cov.cover_round_.assign(m, std::nullopt);
  cov.cover_switches_.assign(m, std::nullopt);
  for (std::size_t bin = 0; bin < q.n(); ++bin) {
    for (BallId b : q.queue(bin)) cov.visit(b, bin);
  }
  return cov;
}

bool CoverageTracker::visited(BallId ball, std::size_t bin) const {
  if (ball >= m() || bin >= n_) throw std::out_of_range("CoverageTracker::visited");
  return (bits_[ball * words_ + bin / 64] >> (bin % 64)) & 1U;
}

void CoverageTracker::visit(BallId ball, std::size_t bin) {
  std::uint64_t& word = bits_[ball * words_ + bin / 64];
  const std::uint64_t mask = std::uint64_t{1} << (bin % 64);
  if (word & mask) return;
  word |= mask;
  if (++visited_count_[ball] == n_) {
    cover_round_[ball] = round_;
    cover_switches_[ball] = switches_[ball];
    ++covered_;
  }
}

struct TraversalStepper {
  static void step(QueueSystem& q, CoverageTracker& cov, TieBreakPolicy policy,
                   TraversalStreams& rng, std::vector<std::size_t>* draws) {
    const std::size_t n = q.n();
    if (cov.n() != n || cov.m() != q.m()) {
      throw std::invalid_argument("traversal_step: tracker does not match queue system");
    }
    std::vector<std::pair<std::size_t, BallId>> moves;
    moves.reserve(n);
    if (draws) draws->clear();
    for (std::size_t bin = 0; bin < n; ++bin) {
      auto& queue = q.queues_[bin];
      if (queue.empty()) continue;
      for (std::size_t pos = 1; pos < queue.size(); ++pos) ++cov.delays_[queue[pos]];
      const BallId front = queue.front();
      queue.pop_front();
      const auto dest = static_cast<std::size_t>(rng.destinations.below(n));
      if (draws) draws->push_back(dest);
      moves.emplace_back(dest, front);
    }

    if (policy.kind == TieBreak::kByBallId) {
      std::sort(moves.begin(), moves.end());
    } else {
      std::stable_sort(moves.begin(), moves.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t lo = 0; lo < moves.size();) {
        std::size_t hi = lo + 1;
        while (hi < moves.size() && moves[hi].first == moves[lo].first) ++hi;
        for (std::size_t k = hi - lo; k > 1; --k) {
          const auto pick = static_cast<std::size_t>(rng.ties.below(k));
          std::swap(moves[lo + k - 1], moves[lo + pick]);
        }
        lo = hi;
      }
    }

    ++cov.round_;
    for (const auto& [dest, ball] : moves) {
      q.queues_[dest].push_back(ball);
      ++cov.switches_[ball];
      cov.visit(ball, dest);
    }
  }
};

void traversal_step(QueueSystem& q, CoverageTracker& cov, TieBreakPolicy policy,
                    TraversalStreams& rng, std::vector<std::size_t>* draws) {
  TraversalStepper::step(q, cov, policy, rng, draws);
}

CoverResult cover_times(std::size_t n, Load m, const InitialConfig& init, TieBreakPolicy policy,
                        std::uint64_t cap, const RandomSource& rng) {
  QueueSystem q = QueueSystem::from_loads(init.build(n, m));
  CoverResult result{{}, CoverageTracker::start(q), 0};
  TraversalStreams streams(rng);
  while (!result.tracker.all_covered() && result.rounds_run < cap) {
    traversal_step(q, result.tracker, policy, streams);
    ++result.rounds_run;
  }
  result.cover_round.resize(result.tracker.m());
  for (std::size_t b = 0; b < result.tracker.m(); ++b) {
    result.cover_round[b] = result.tracker.cover_round(static_cast<BallId>(b));
  }
  return result;
}

SwitchSummary switch_stats(const CoverageTracker& cov) {
  SwitchSummary s;
  const std::size_t m = cov.m();
  s.switches.resize(m);
  s.delays.resize(m);
  s.coverage.resize(m);
  for (std::size_t b = 0; b < m; ++b) {
    const auto ball = static_cast<BallId>(b);
    s.switches[b] = cov.switches(ball);
    s.delays[b] = cov.delays(ball);
    s.coverage[b] = static_cast<double>(cov.visited_count(ball)) / static_cast<double>(cov.n());
    s.mean_switches += static_cast<double>(s.switches[b]);
    s.mean_delays += static_cast<double>(s.delays[b]);
    s.mean_coverage += s.coverage[b];
  }
  if (m > 0) {
    s.mean_switches /= static_cast<double>(m);
    s.mean_delays /= static_cast<double>(m);
    s.mean_coverage /= static_cast<double>(m);
  }
  return s;
}

}  // namespace rbb
