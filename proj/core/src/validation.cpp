#include "rbb/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rbb/trace.hpp"

namespace rbb {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string seed_note(const RandomSource& rng) {
  return "seed=" + std::to_string(rng.master_seed()) + " stream=" + std::to_string(rng.stream_id());
}

Verdict verdict_of(bool ok) { return ok ? Verdict::kPass : Verdict::kFail; }

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "fail";
}

CheckReport check_quadratic_drift(const LoadVector& config, std::uint64_t samples, RandomSource rng,
                                  double bound_offset) {
  const std::size_t n = config.n();
  const Load m = config.m();
  const std::uint64_t upsilon = quadratic_potential(config);
  const std::size_t empty = config.empty_bins();
  const double bound = quadratic_drift_bound(upsilon, m, n, empty) + bound_offset;

  CheckReport report;
  report.name = "quadratic_drift[" + (n <= 8 ? config.to_string() : "n=" + std::to_string(n) +
                                                                      ",m=" + std::to_string(m)) + "]";
  report.seed = rng.master_seed();

  if (use_exact_branch(config)) {
    const Distribution dist = one_step_distribution(config);
    std::uint64_t weighted = 0;
    for (const auto& o : dist.outcomes) weighted += o.count * quadratic_potential(o.state);
    const double mean = static_cast<double>(weighted) / static_cast<double>(dist.tuples);
    bool ok = false;
    if (bound_offset == 0.0) {
      // n * sum(count * Upsilon') <= tuples * (n Upsilon - 2 m F + 2 n^2), all integers.
      const auto nn = static_cast<std::int64_t>(n);
      const std::int64_t lhs = nn * static_cast<std::int64_t>(weighted);
      const std::int64_t rhs = static_cast<std::int64_t>(dist.tuples) *
                               (nn * static_cast<std::int64_t>(upsilon) -
                                2 * m * static_cast<std::int64_t>(empty) + 2 * nn * nn);
      ok = lhs <= rhs;
    } else {
      ok = mean <= bound;
    }
    report.verdict = verdict_of(ok);
    report.statistic = mean;
    report.threshold = bound;
    report.detail = "exact E[Upsilon']=" + fmt(mean) + " over " + std::to_string(dist.tuples) +
                    " destination tuples";
    return report;
  }

  RunningStats stats;
  std::vector<std::size_t> draws;
  LoadVector x = config;
  for (std::uint64_t i = 0; i < samples; ++i) {
    x = config;
    rbb_step_inplace(x, rng, draws);
    stats.add(static_cast<double>(quadratic_potential(x)));
  }
  const double se = stats.standard_error();
  report.statistic = stats.mean();
  report.threshold = bound + 3.0 * se;
  report.verdict = verdict_of(report.statistic <= report.threshold);
  report.detail = "mean=" + fmt(stats.mean()) + " se=" + fmt(se) + " bound=" + fmt(bound) +
                  " samples=" + std::to_string(samples) + " " + seed_note(rng);
  return report;
}

CheckReport check_exponential_drift(const LoadVector& config, double alpha, std::uint64_t samples,
                                    RandomSource rng, double bound_scale) {
  const std::size_t n = config.n();
  const std::size_t kappa = n - config.empty_bins();
  const double log_phi = log_exponential_potential(config, alpha);

  CheckReport report;
  report.name = "exponential_drift[" +
                (n <= 8 ? config.to_string()
                        : "n=" + std::to_string(n) + ",m=" + std::to_string(config.m())) +
                ",alpha=" + fmt(alpha) + "]";
  report.seed = rng.master_seed();

  if (use_exact_branch(config)) {
    const double phi = exponential_potential(config, alpha, PotentialMode::kLinear);
    const double bound = bound_scale * exponential_drift_bound(phi, alpha, n, kappa);
    const Distribution dist = one_step_distribution(config);
    const double mean =
        expected_observable(dist, ObservableSelector{ObservableKind::kExponential, alpha});
    report.statistic = mean;
    report.threshold = bound;
    report.verdict = verdict_of(mean <= bound * (1.0 + 1e-12));
    report.detail = "exact E[Phi']=" + fmt(mean) + " Phi=" + fmt(phi);
    return report;
  }

  // Work with Phi'/Phi so large alpha * load never overflows.
  const double bound_ratio =
      bound_scale * std::exp(log_exponential_drift_bound(log_phi, alpha, n, kappa) - log_phi);
  RunningStats stats;
  std::vector<std::size_t> draws;
  LoadVector x = config;
  for (std::uint64_t i = 0; i < samples; ++i) {
    x = config;
    rbb_step_inplace(x, rng, draws);
    stats.add(std::exp(log_exponential_potential(x, alpha) - log_phi));
  }
  const double se = stats.standard_error();
  report.statistic = stats.mean();
  report.threshold = bound_ratio + 3.0 * se;
  report.verdict = verdict_of(report.statistic <= report.threshold);
  report.detail = "ratios to Phi: mean=" + fmt(stats.mean()) + " se=" + fmt(se) +
                  " bound=" + fmt(bound_ratio) + " samples=" + std::to_string(samples) + " " +
                  seed_note(rng);
  return report;
}

CheckReport check_supermartingale(const SupermartingaleSpec& spec, std::uint64_t t0,
                                  const PotentialParams& params, std::uint64_t samples,
                                  RandomSource rng) {
  if (params.n != spec.n) throw std::invalid_argument("check_supermartingale: params.n != spec.n");
  const double alpha = params.alpha;
  const double log_threshold = params.log_threshold();
  const TraceObservers observers{true, false, false, alpha};

  CheckReport report;
  report.name = "supermartingale[n=" + std::to_string(spec.n) + ",m=" + std::to_string(spec.m) +
                ",alpha=" + fmt(alpha) + "]";
  report.seed = rng.master_seed();

  // Path up to the horizon; stop once the series is dead past t0.
  std::vector<LoadVector> states;
  std::vector<ObservationRow> rows;
  LoadVector state = spec.init.build(spec.n, spec.m);
  const std::uint64_t horizon = std::max(spec.horizon, t0 + 1);
  RandomSource path_rng = rng.substream(0);
  std::vector<std::size_t> draws;
  for (std::uint64_t t = 0; t <= horizon; ++t) {
    states.push_back(state);
    rows.push_back(observe(state, t, observers));
    if (t >= t0 && rows.back().exponential->log_phi <= log_threshold) break;
    rbb_step_inplace(state, path_rng, draws);
  }
  const AdjustedSeries series = adjusted_potential_series(rows, t0, params);

  std::vector<std::size_t> live;
  for (std::size_t j = 0; j < series.size(); ++j) {
    if (!series.stopped[j]) live.push_back(j);
  }
  std::vector<std::size_t> chosen;
  const std::size_t k = std::max<std::size_t>(spec.sampled_rounds, 1);
  if (live.size() <= k) {
    chosen = live;
  } else {
    for (std::size_t i = 0; i < k; ++i) chosen.push_back(live[i * (live.size() - 1) / (k - 1)]);
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  }

  const double penalty = 1.5 * alpha * alpha;
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t nontrivial = 0;
  RandomSource branch_rng = rng.substream(1);
  std::ostringstream detail;
  for (std::size_t j : chosen) {
    const std::size_t s = static_cast<std::size_t>(t0) + j;
    const double log_phi = rows[s].exponential->log_phi;
    if (log_phi <= log_threshold) {
      // Stopping event at s: the next value is exactly 0.
      worst = std::max(worst, 0.0);
      continue;
    }
    ++nontrivial;
    const double log_factor =
        alpha * rows[s].empty->fraction() - penalty + spec.log_perturbation - log_phi;
    RunningStats ratio;
    LoadVector x = states[s];
    for (std::uint64_t i = 0; i < samples; ++i) {
      x = states[s];
      rbb_step_inplace(x, branch_rng, draws);
      ratio.add(std::exp(log_exponential_potential(x, alpha) + log_factor));
    }
    const double lower = ratio.mean() - 3.0 * ratio.standard_error();
    if (lower > worst) {
      worst = lower;
      detail.str("");
      detail << "worst round s=" << s << " mean_ratio=" << fmt(ratio.mean())
             << " se=" << fmt(ratio.standard_error());
    }
  }
  if (chosen.empty()) worst = 0.0;
  report.statistic = worst;
  report.threshold = 1.0;
  report.verdict = verdict_of(worst <= 1.0);
  report.detail = detail.str() + (detail.str().empty() ? "" : "; ") + "sampled_rounds=" +
                  std::to_string(chosen.size()) + " nontrivial=" + std::to_string(nontrivial) +
                  " samples=" + std::to_string(samples) + " " + seed_note(rng);
  return report;
}

CheckReport check_coupling_dominance(std::size_t n, Load m, std::uint64_t rounds,
                                     std::uint64_t reps, RandomSource rng, bool swap_roles) {
  CheckReport report;
  report.name = std::string(swap_roles ? "coupling_swapped" : "coupling_dominance") + "[n=" +
                std::to_string(n) + ",m=" + std::to_string(m) + "]";
  report.seed = rng.master_seed();
  report.threshold = 0.0;

  std::uint64_t violations = 0;
  std::string first;
  std::vector<std::size_t> draws(n);
  for (std::uint64_t rep = 0; rep < reps && violations == 0; ++rep) {
    LoadVector x = one_choice_run(n, m, rng);
    LoadVector y = x;
    for (std::uint64_t t = 1; t <= rounds; ++t) {
      if (!swap_roles) {
        coupled_step_inplace(x, y, rng, draws);
      } else {
        auto& xl = x.mutable_loads();
        auto& yl = y.mutable_loads();
        for (std::size_t j = 0; j < n; ++j) draws[j] = static_cast<std::size_t>(rng.below(n));
        std::size_t kappa_y = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (xl[i] > 0) --xl[i];
          if (yl[i] > 0) {
            --yl[i];
            ++kappa_y;
          }
        }
        for (std::size_t j = 0; j < n; ++j) {
          ++xl[draws[j]];
          if (j < kappa_y) ++yl[draws[j]];
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i] > y[i]) {
          ++violations;
          first = "rep=" + std::to_string(rep) + " round=" + std::to_string(t) +
                  " bin=" + std::to_string(i);
          break;
        }
      }
      if (violations) break;
    }
  }
  report.statistic = static_cast<double>(violations);
  report.verdict = verdict_of(violations == 0);
  report.detail = violations ? "first violation " + first
                             : std::to_string(reps) + " reps x " + std::to_string(rounds) +
                                   " rounds, no violation " + seed_note(rng);
  return report;
}

CheckReport check_binomial_bound(std::size_t n_lo, std::size_t n_hi, double extra_bits) {
  if (n_lo < 8 || n_hi > 10000 || n_lo > n_hi) {
    throw std::invalid_argument("check_binomial_bound: need 8 <= n_lo <= n_hi <= 10^4");
  }
  CheckReport report;
  report.name = "binomial_bound[" + std::to_string(n_lo) + "," + std::to_string(n_hi) + "]";
  report.threshold = 0.0;
  long double worst = -std::numeric_limits<long double>::infinity();
  std::size_t worst_n = 0;
  std::size_t worst_gamma = 0;
  std::uint64_t violations = 0;
  const long double ln2 = std::log(2.0L);
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    const auto nl = static_cast<long double>(n);
    // ln P[Bin(n, 1/n) = gamma], advanced by the ratio (n - gamma + 1) / (gamma (n - 1)).
    long double log_pmf = nl * std::log1p(-1.0L / nl);
    for (std::size_t gamma = 1; gamma <= n; ++gamma) {
      const auto g = static_cast<long double>(gamma);
      log_pmf += std::log(nl - g + 1.0L) - std::log(g) - std::log(nl - 1.0L);
      const long double excess = log_pmf / ln2 + g + static_cast<long double>(extra_bits);
      if (excess > 0.0L) ++violations;
      if (excess > worst) {
        worst = excess;
        worst_n = n;
        worst_gamma = gamma;
      }
    }
  }
  report.statistic = static_cast<double>(worst);
  report.verdict = verdict_of(violations == 0);
  report.detail = "violations=" + std::to_string(violations) + " tightest at n=" +
                  std::to_string(worst_n) + " gamma=" + std::to_string(worst_gamma);
  return report;
}

CheckReport check_quadratic_change(const LoadVector& config, std::uint64_t samples,
                                   RandomSource rng) {
  const std::size_t n = config.n();
  const Load m = config.m();
  const double ln_n = std::log(static_cast<double>(n));
  if (n >= 2) {
    if (m < static_cast<Load>(n)) throw std::invalid_argument("check_quadratic_change: need m >= n");
    if (static_cast<double>(config.max_load()) > static_cast<double>(m) / static_cast<double>(n) * ln_n) {
      throw std::invalid_argument("check_quadratic_change: max load exceeds (m/n) ln n");
    }
  }
  const double bound = 2.0 * static_cast<double>(m) * ln_n + 3.0 * static_cast<double>(n);
  const auto before = static_cast<double>(quadratic_potential(config));

  CheckReport report;
  report.name = "quadratic_change[n=" + std::to_string(n) + ",m=" + std::to_string(m) + "]";
  report.seed = rng.master_seed();
  std::uint64_t violations = 0;
  double largest = 0.0;
  std::vector<std::size_t> draws;
  LoadVector x = config;
  for (std::uint64_t i = 0; i < samples; ++i) {
    x = config;
    rbb_step_inplace(x, rng, draws);
    const double change = std::abs(static_cast<double>(quadratic_potential(x)) - before);
    largest = std::max(largest, change);
    if (change > bound) ++violations;
  }
  report.statistic = samples ? static_cast<double>(violations) / static_cast<double>(samples) : 0.0;
  report.threshold = 1e-3;
  report.verdict = verdict_of(report.statistic <= report.threshold);
  report.detail = "largest change=" + fmt(largest) + " bound=" + fmt(bound) + " " + seed_note(rng);
  return report;
}

namespace {

Load walk_step(const DriftWalkConfig& cfg, Load x, RandomSource& rng) {
  switch (cfg.law) {
    case WalkLaw::kSymmetric:
      return x + (rng.below(2) ? 1 : -1);
    case WalkLaw::kBiasedUp:
      return x + (rng.uniform01() < 0.7 ? 1 : -1);
    case WalkLaw::kIdealizedSingleBin: {
      Load arrivals = 0;
      for (std::size_t j = 0; j < cfg.bins; ++j) arrivals += rng.below(cfg.bins) == 0 ? 1 : 0;
      return x - (x > 0 ? 1 : 0) + arrivals;
    }
  }
  return x;
}

constexpr std::uint64_t kWalkStepCap = 100'000'000;

}  // namespace

DriftWalkEstimate estimate_drift_walk(const DriftWalkConfig& cfg, std::uint64_t reps,
                                      RandomSource rng) {
  if (!(0 < cfg.start && cfg.start < cfg.target && cfg.target <= cfg.cap)) {
    throw std::invalid_argument("estimate_drift_walk: need 0 < s < k <= M");
  }
  if (!(cfg.sigma2 > 0.0)) throw std::invalid_argument("estimate_drift_walk: sigma2 must be > 0");
  if (cfg.law == WalkLaw::kIdealizedSingleBin && cfg.bins < 1) {
    throw std::invalid_argument("estimate_drift_walk: bins must be >= 1");
  }
  std::uint64_t zeros = 0;
  RunningStats exit_time;
  for (std::uint64_t r = 0; r < reps; ++r) {
    Load x = cfg.start;
    std::uint64_t t = 0;
    while (x > 0 && x < cfg.target) {
      x = walk_step(cfg, x, rng);
      if (++t > kWalkStepCap) throw std::runtime_error("estimate_drift_walk: walk did not exit");
    }
    if (x == 0) ++zeros;
    exit_time.add(static_cast<double>(t));
  }
  DriftWalkEstimate est;
  // Plain proportion and binomial standard error for the 3 SE rules.
  const double p = reps ? static_cast<double>(zeros) / static_cast<double>(reps) : 0.0;
  est.hit_zero.mean = p;
  est.hit_zero.samples = reps;
  est.hit_zero.half_width = reps ? std::sqrt(p * (1.0 - p) / static_cast<double>(reps)) : 0.0;
  est.hit_zero.level = 0.0;
  est.exit_time = mean_interval(exit_time);
  est.exit_time.half_width = exit_time.standard_error();
  est.exit_time.level = 0.0;

  if (cfg.law == WalkLaw::kIdealizedSingleBin) {
    RunningStats slack;
    const double s2 = static_cast<double>(cfg.start) * static_cast<double>(cfg.start);
    for (std::uint64_t r = 0; r < reps; ++r) {
      Load x = cfg.start;
      std::uint64_t t = 0;
      while (x < cfg.target) {
        x = walk_step(cfg, x, rng);
        if (++t > kWalkStepCap) throw std::runtime_error("estimate_drift_walk: walk did not exit");
      }
      const double xt = static_cast<double>(x);
      slack.add((xt * xt - s2) / cfg.sigma2 - static_cast<double>(t));
    }
    ConfidenceInterval ci = mean_interval(slack);
    ci.half_width = slack.standard_error();
    ci.level = 0.0;
    est.upward_slack = ci;
  }
  return est;
}

CheckReport check_drift_lemmas(const DriftWalkConfig& cfg, std::uint64_t reps, RandomSource rng) {
  const DriftWalkEstimate est = estimate_drift_walk(cfg, reps, rng);
  const double s = static_cast<double>(cfg.start);
  const double k = static_cast<double>(cfg.target);
  const double ruin = 1.0 - s / k;
  const double p_floor = ruin - 3.0 * est.hit_zero.half_width;
  const double time_bound = 5.0 * s * s / cfg.sigma2;

  const bool ok_ruin = est.hit_zero.mean >= p_floor;
  const bool ok_time = est.exit_time.mean <= time_bound;
  const bool ok_up =
      !est.upward_slack || est.upward_slack->mean + 3.0 * est.upward_slack->half_width >= 0.0;

  static constexpr const char* kLawNames[] = {"symmetric", "idealized_single_bin", "biased_up"};
  CheckReport report;
  report.name = std::string("drift_lemmas[") + kLawNames[static_cast<int>(cfg.law)] +
                ",s=" + std::to_string(cfg.start) + ",k=" + std::to_string(cfg.target) + "]";
  report.seed = rng.master_seed();
  report.statistic = est.hit_zero.mean;
  report.threshold = p_floor;
  report.verdict = verdict_of(ok_ruin && ok_time && ok_up);
  report.detail = "P[hit 0]=" + fmt(est.hit_zero.mean) + " se=" + fmt(est.hit_zero.half_width) +
                  " (floor " + fmt(ruin) + "); E[tau]=" + fmt(est.exit_time.mean) +
                  " (bound " + fmt(time_bound) + ")";
  if (est.upward_slack) {
    report.detail += "; upward slack=" + fmt(est.upward_slack->mean) +
                     " se=" + fmt(est.upward_slack->half_width);
  }
  report.detail += " reps=" + std::to_string(reps) + " " + seed_note(rng);
  return report;
}

CheckReport check_one_choice(std::size_t n, double c, std::uint64_t reps, RandomSource rng) {
  if (n < 2) throw std::invalid_argument("check_one_choice: need n >= 2");
  const double ln_n = std::log(static_cast<double>(n));
  if (c < 1.0 / ln_n) throw std::invalid_argument("check_one_choice: need c >= 1 / ln n");
  const auto balls = static_cast<Load>(std::ceil(c * static_cast<double>(n) * ln_n));
  const double level = (c + std::sqrt(c) / 10.0) * ln_n;
  if (level > static_cast<double>(balls)) {
    throw std::invalid_argument("check_one_choice: target max load exceeds the ball count");
  }
  std::uint64_t heavy = 0;
  std::uint64_t small_quadratic = 0;
  for (std::uint64_t r = 0; r < reps; ++r) {
    if (static_cast<double>(one_choice_run(n, balls, rng).max_load()) >= level) ++heavy;
    if (quadratic_potential(one_choice_run(n, static_cast<Load>(n), rng)) <= 3 * n) {
      ++small_quadratic;
    }
  }
  CheckReport report;
  report.name = "one_choice[n=" + std::to_string(n) + ",c=" + fmt(c) + "]";
  report.seed = rng.master_seed();
  const double heavy_rate = reps ? static_cast<double>(heavy) / static_cast<double>(reps) : 0.0;
  const double quad_rate =
      reps ? static_cast<double>(small_quadratic) / static_cast<double>(reps) : 0.0;
  report.statistic = heavy_rate;
  report.threshold = 0.95;
  report.verdict = verdict_of(heavy_rate >= 0.95 && quad_rate >= 0.99);
  report.detail = "max>=" + fmt(level) + " in " + std::to_string(heavy) + "/" +
                  std::to_string(reps) + "; Upsilon<=3n in " + std::to_string(small_quadratic) +
                  "/" + std::to_string(reps) + " " + seed_note(rng);
  return report;
}

CheckReport chi_square_report(const std::string& name, const std::vector<std::uint64_t>& observed,
                              const std::vector<double>& probabilities, std::uint64_t seed) {
  if (observed.size() != probabilities.size()) {
    throw std::invalid_argument("chi_square_report: size mismatch");
  }
  std::uint64_t total = 0;
  for (auto o : observed) total += o;
  double statistic = 0.0;
  std::uint64_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    ++cells;
    const double expected = probabilities[i] * static_cast<double>(total);
    const double diff = static_cast<double>(observed[i]) - expected;
    statistic += diff * diff / expected;
  }
  const std::uint64_t df = cells > 0 ? cells - 1 : 0;
  CheckReport report;
  report.name = name;
  report.seed = seed;
  report.statistic = statistic;
  report.threshold = chi_square_critical(df, kGoodnessOfFitSignificance);
  report.verdict = verdict_of(statistic <= report.threshold);
  report.detail = "df=" + std::to_string(df) + " p=" + fmt(chi_square_sf(statistic, df)) +
                  " samples=" + std::to_string(total);
  return report;
}

CheckReport chi_square_step(const LoadVector& config, std::uint64_t samples, RandomSource rng) {
  return chi_square_step_with(config, samples, rng, rng.master_seed());
}

}  // namespace rbb
