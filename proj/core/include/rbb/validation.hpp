#pragma once

// Runnable checks for the drift, coupling, supermartingale, and appendix
// facts about RBB. Exact checks use the brute-force oracle; statistical
// checks report mean, standard error, sample count, and the seed needed to
// reproduce them.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbb/exact_oracle.hpp"
#include "rbb/load_vector.hpp"
#include "rbb/observables.hpp"
#include "rbb/process.hpp"
#include "rbb/random.hpp"
#include "rbb/stats.hpp"

namespace rbb {

enum class Verdict { kPass, kFail, kInconclusive };

std::string to_string(Verdict v);

struct CheckReport {
  std::string name;
  Verdict verdict = Verdict::kFail;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string detail;
  std::uint64_t seed = 0;

  bool passed() const noexcept { return verdict == Verdict::kPass; }
};

/// Largest instance handled by the exact-oracle branch of the drift checks.
inline constexpr std::size_t kExactMaxBins = 3;
inline constexpr Load kExactMaxBalls = 4;

inline bool use_exact_branch(const LoadVector& x) {
  return x.n() <= kExactMaxBins && x.m() <= kExactMaxBalls;
}

/// E[Upsilon^{t+1} | x] <= Upsilon - 2(m/n)F + 2n + bound_offset.
/// Tiny states are checked exactly in integer arithmetic; otherwise
/// Monte Carlo with pass iff mean <= bound + 3 SE. bound_offset only exists
/// for negative controls.
CheckReport check_quadratic_drift(const LoadVector& config, std::uint64_t samples, RandomSource rng,
                                  double bound_offset = 0.0);

/// E[Phi^{t+1} | x] <= bound_scale * exponential_drift_bound(...).
CheckReport check_exponential_drift(const LoadVector& config, double alpha, std::uint64_t samples,
                                    RandomSource rng, double bound_scale = 1.0);

struct SupermartingaleSpec {
  std::size_t n = 20;
  Load m = 100;
  InitialConfig init = InitialConfig::single_bin();
  /// Rounds simulated to locate the live part of the adjusted series.
  std::uint64_t horizon = 2000;
  std::size_t sampled_rounds = 20;
  /// Extra log-factor per round applied to the series; 0 except in negative
  /// controls.
  double log_perturbation = 0.0;
};

/// Branching estimate of E[adjusted^{s+1} | x^s] <= adjusted^s + 3 SE at up
/// to spec.sampled_rounds rounds s >= t0 where the series is still positive.
/// The estimate is normalized by the current value, so the statistic is
/// max_s (mean ratio - 3 SE) against the threshold 1.
CheckReport check_supermartingale(const SupermartingaleSpec& spec, std::uint64_t t0,
                                  const PotentialParams& params, std::uint64_t samples,
                                  RandomSource rng);

/// Runs `reps` coupled traces from random x = y and fails on the first
/// round where some x_i > y_i. swap_roles feeds the RBB copy all n samples
/// instead of the prefix (negative control).
CheckReport check_coupling_dominance(std::size_t n, Load m, std::uint64_t rounds,
                                     std::uint64_t reps, RandomSource rng,
                                     bool swap_roles = false);

/// Exact Bin(n, 1/n) pmf at every gamma in [1, n] for n in [n_lo, n_hi]
/// against 2^{-gamma - extra_bits}. The statistic is the largest
/// log2(pmf) + gamma + extra_bits, which must be <= 0.
CheckReport check_binomial_bound(std::size_t n_lo, std::size_t n_hi, double extra_bits = 0.0);

/// |Upsilon^{t+1} - Upsilon^t| <= 2 m ln n + 3n in all but a 1e-3 fraction
/// of samples. Requires max load <= (m/n) ln n and m >= n when n >= 2;
/// throws std::invalid_argument otherwise.
CheckReport check_quadratic_change(const LoadVector& config, std::uint64_t samples,
                                   RandomSource rng);

enum class WalkLaw {
  /// +1 / -1 with probability 1/2 each.
  kSymmetric,
  /// X' = X - 1{X > 0} + Bin(bins, 1/bins): one bin of the idealized process.
  kIdealizedSingleBin,
  /// +1 w.p. 0.7, -1 w.p. 0.3. Violates the drift hypothesis; negative control.
  kBiasedUp,
};

struct DriftWalkConfig {
  Load cap = 1000;
  Load start = 1;
  Load target = 2;
  double sigma2 = 1.0;
  WalkLaw law = WalkLaw::kSymmetric;
  std::size_t bins = 10;
};

struct DriftWalkEstimate {
  /// Fraction of runs absorbed at 0 before reaching `target`.
  ConfidenceInterval hit_zero;
  /// Exit time from (0, target).
  ConfidenceInterval exit_time;
  /// Per-run (X_up^2 - s^2) / sigma2 - tau_up for the upward-only stopping
  /// time; only for laws with non-negative drift everywhere.
  std::optional<ConfidenceInterval> upward_slack;
};

DriftWalkEstimate estimate_drift_walk(const DriftWalkConfig& cfg, std::uint64_t reps,
                                      RandomSource rng);

/// Pass iff P[X^tau = 0] >= 1 - s/k - 3 SE, E[tau] <= 5 s^2 / sigma2, and
/// (when applicable) the upward exit-time inequality holds within 3 SE.
CheckReport check_drift_lemmas(const DriftWalkConfig& cfg, std::uint64_t reps, RandomSource rng);

/// OneChoice facts: with ceil(c n ln n) balls the max load reaches
/// (c + sqrt(c)/10) ln n in >= 95% of runs; with n balls Upsilon <= 3n in
/// >= 99% of runs.
CheckReport check_one_choice(std::size_t n, double c, std::uint64_t reps, RandomSource rng);

/// Goodness of fit at significance 0.001 between simulated one-step
/// successors and the exact law.
template <BinSampler G>
CheckReport chi_square_step_with(const LoadVector& config, std::uint64_t samples, G& sampler,
                                 std::uint64_t seed);

CheckReport chi_square_step(const LoadVector& config, std::uint64_t samples, RandomSource rng);

/// Chi-square test of observed outcome counts against exact probabilities.
CheckReport chi_square_report(const std::string& name, const std::vector<std::uint64_t>& observed,
                              const std::vector<double>& probabilities, std::uint64_t seed);

inline constexpr double kGoodnessOfFitSignificance = 0.001;

template <BinSampler G>
CheckReport chi_square_step_with(const LoadVector& config, std::uint64_t samples, G& sampler,
                                 std::uint64_t seed) {
  const Distribution exact = one_step_distribution(config);
  // Successor states are keyed by their base-(m+1) digits.
  const auto radix = static_cast<std::uint64_t>(config.m()) + 1;
  auto key_of = [radix](std::span<const Load> loads) {
    std::uint64_t key = 0;
    for (auto it = loads.rbegin(); it != loads.rend(); ++it) {
      key = key * radix + static_cast<std::uint64_t>(*it);
    }
    return key;
  };
  std::map<std::uint64_t, std::size_t> slot;
  std::vector<double> probabilities;
  for (const auto& o : exact.outcomes) {
    slot.emplace(key_of(o.state.loads()), probabilities.size());
    probabilities.push_back(o.probability);
  }
  std::vector<std::uint64_t> observed(probabilities.size(), 0);
  std::uint64_t stray = 0;
  std::vector<std::size_t> draws;
  LoadVector x = config;
  for (std::uint64_t i = 0; i < samples; ++i) {
    x = config;
    rbb_step_inplace(x, sampler, draws);
    auto it = slot.find(key_of(x.loads()));
    if (it == slot.end()) {
      ++stray;
    } else {
      ++observed[it->second];
    }
  }
  CheckReport report =
      chi_square_report("chi_square_step[" + config.to_string() + "]", observed, probabilities, seed);
  if (stray > 0) {
    report.verdict = Verdict::kFail;
    report.detail += "; " + std::to_string(stray) + " successors outside the exact support";
  }
  return report;
}

}  // namespace rbb
