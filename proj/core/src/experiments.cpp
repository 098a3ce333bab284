#include "rbb/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "rbb/observables.hpp"
#include "rbb/process.hpp"
#include "rbb/random.hpp"
#include "rbb/stats.hpp"
#include "rbb/traversal.hpp"

namespace rbb {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kMaxLoad: return "max_load";
    case ExperimentKind::kEmptyFraction: return "empty_fraction";
    case ExperimentKind::kConvergence: return "convergence";
    case ExperimentKind::kTraversal: return "traversal";
  }
  return "unknown";
}

ExperimentKind parse_experiment(const std::string& name) {
  for (auto k : {ExperimentKind::kMaxLoad, ExperimentKind::kEmptyFraction,
                 ExperimentKind::kConvergence, ExperimentKind::kTraversal}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

double AlphaChoice::resolve(std::size_t n, Load m) const {
  switch (preset) {
    case AlphaPreset::kPaper: return default_params(n, m).alpha;
    case AlphaPreset::kPractical: return practical_alpha(n, m);
    case AlphaPreset::kCustom: return value;
  }
  return value;
}

AlphaChoice AlphaChoice::parse(const std::string& text) {
  if (text == "paper") return {AlphaPreset::kPaper, 0.0};
  if (text == "practical") return {AlphaPreset::kPractical, 0.0};
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument("alpha must be 'paper', 'practical' or a positive number, got '" +
                                text + "'");
  }
  return {AlphaPreset::kCustom, v};
}

void ExperimentConfig::validate() const {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (!(threshold_factor > 0.0)) throw std::invalid_argument("threshold_factor must be > 0");
  if (n_list.empty()) throw std::invalid_argument("empty n list");
  if (m_multipliers.empty() && m_absolute.empty()) throw std::invalid_argument("empty m list");
  for (auto n : n_list) {
    if (n == 0) throw std::invalid_argument("n must be >= 1");
  }
  for (double k : m_multipliers) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("m multiplier must be >= 0");
  }
  for (Load m : m_absolute) {
    if (m < 0) throw std::invalid_argument("m must be >= 0");
  }
  if (alpha.preset == AlphaPreset::kCustom && !(alpha.value > 0.0)) {
    throw std::invalid_argument("custom alpha must be > 0");
  }
}

std::vector<std::pair<std::size_t, Load>> ExperimentConfig::grid() const {
  validate();
  std::set<std::pair<std::size_t, Load>> pairs;
  for (auto n : n_list) {
    for (double k : m_multipliers) {
      const double m = std::round(k * static_cast<double>(n));
      if (m > static_cast<double>(kMaxBalls)) throw std::invalid_argument("m exceeds the ball cap");
      pairs.emplace(n, static_cast<Load>(m));
    }
    for (Load m : m_absolute) {
      if (m > kMaxBalls) throw std::invalid_argument("m exceeds the ball cap");
      pairs.emplace(n, m);
    }
  }
  return {pairs.begin(), pairs.end()};
}

void ExperimentConfig::apply_paper_scale(ExperimentKind kind) {
  n_list = {100, 1000, 10000};
  m_multipliers.clear();
  m_absolute.clear();
  for (int k = 1; k <= 50; ++k) m_multipliers.push_back(k);
  switch (kind) {
    case ExperimentKind::kMaxLoad:
      rounds = 1'000'000;
      reps = 25;
      break;
    case ExperimentKind::kEmptyFraction:
      rounds = 1'000'000;
      break;
    case ExperimentKind::kConvergence:
      reps = 100;
      break;
    case ExperimentKind::kTraversal:
      break;
  }
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& job) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

struct Job {
  std::size_t n;
  Load m;
  std::uint64_t rep;
};

// Grid order is (n, m) ascending, then rep, so job index order is row order.
std::vector<Job> expand_jobs(const ExperimentConfig& cfg) {
  std::vector<Job> jobs;
  for (auto [n, m] : cfg.grid()) {
    for (std::uint64_t rep = 0; rep < cfg.reps; ++rep) jobs.push_back({n, m, rep});
  }
  return jobs;
}

RandomSource job_stream(const ExperimentConfig& cfg, const Job& job) {
  return RandomSource(cfg.seed, stream_key(job.n, static_cast<std::uint64_t>(job.m), job.rep));
}

template <typename Row, typename Fn>
std::vector<Row> run_jobs(const ExperimentConfig& cfg, Fn&& fn) {
  const auto jobs = expand_jobs(cfg);
  std::vector<Row> rows(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    RandomSource rng = job_stream(cfg, jobs[i]);
    rows[i] = fn(jobs[i], rng);
  });
  return rows;
}

double log_scale(std::size_t n, Load m) {
  return static_cast<double>(m) / static_cast<double>(n) * std::log(static_cast<double>(n));
}

}  // namespace

std::vector<MaxLoadRow> experiment_max_load(const ExperimentConfig& cfg) {
  const InitialConfig init = cfg.init.value_or(InitialConfig::uniform());
  return run_jobs<MaxLoadRow>(cfg, [&](const Job& job, RandomSource& rng) {
    LoadVector x = init.build(job.n, job.m);
    std::vector<std::size_t> draws;
    for (std::uint64_t t = 0; t < cfg.rounds; ++t) rbb_step_inplace(x, rng, draws);
    MaxLoadRow row{job.n, job.m, cfg.rounds, job.rep, cfg.seed, x.max_load(), std::nullopt};
    const double scale = log_scale(job.n, job.m);
    if (scale > 0.0) row.normalized = static_cast<double>(row.max_load) / scale;
    return row;
  });
}

std::vector<EmptyFractionRow> experiment_empty_fraction(const ExperimentConfig& cfg) {
  const InitialConfig init = cfg.init.value_or(InitialConfig::uniform());
  const std::uint64_t burn_in = cfg.burn_in.value_or(cfg.rounds / 10);
  if (cfg.rounds <= burn_in) {
    throw std::invalid_argument("empty_fraction needs rounds > burn_in (rounds " +
                                std::to_string(cfg.rounds) + ", burn_in " +
                                std::to_string(burn_in) + ")");
  }
  return run_jobs<EmptyFractionRow>(cfg, [&](const Job& job, RandomSource& rng) {
    LoadVector x = init.build(job.n, job.m);
    std::vector<std::size_t> draws;
    std::vector<double> series;
    series.reserve(cfg.rounds - burn_in);
    const double n = static_cast<double>(job.n);
    // Averages f over rounds burn_in+1 .. rounds.
    for (std::uint64_t t = 1; t <= cfg.rounds; ++t) {
      rbb_step_inplace(x, rng, draws);
      if (t > burn_in) series.push_back(static_cast<double>(x.empty_bins()) / n);
    }
    const auto ci = batch_means_interval(series);
    return EmptyFractionRow{job.n,   job.m,   cfg.rounds, burn_in,   job.rep,
                            cfg.seed, ci.mean, ci.lower(), ci.upper()};
  });
}

std::vector<ConvergenceRow> experiment_convergence(const ExperimentConfig& cfg) {
  const InitialConfig init = cfg.init.value_or(InitialConfig::single_bin());
  return run_jobs<ConvergenceRow>(cfg, [&](const Job& job, RandomSource& rng) {
    const double threshold = cfg.threshold_factor * log_scale(job.n, job.m);
    ConvergenceRow row{job.n, job.m, threshold, job.rep, cfg.seed, std::nullopt, false};
    LoadVector x = init.build(job.n, job.m);
    std::vector<std::size_t> draws;
    std::uint64_t t = 0;
    for (;;) {
      if (static_cast<double>(x.max_load()) <= threshold) {
        row.rounds_to_converge = t;
        break;
      }
      if (t == cfg.rounds) {
        row.capped = true;
        break;
      }
      rbb_step_inplace(x, rng, draws);
      ++t;
    }
    return row;
  });
}

std::vector<TraversalRow> experiment_traversal(const ExperimentConfig& cfg) {
  const InitialConfig init = cfg.init.value_or(InitialConfig::uniform());
  return run_jobs<TraversalRow>(cfg, [&](const Job& job, RandomSource& rng) {
    const double lm = std::log(static_cast<double>(std::max<Load>(job.m, 2)));
    const std::uint64_t cap =
        cfg.cap.value_or(static_cast<std::uint64_t>(std::ceil(60.0 * static_cast<double>(job.m) * lm)));
    const CoverResult res = cover_times(job.n, job.m, init, TieBreakPolicy::by_ball_id(), cap, rng);
    TraversalRow row{job.n, job.m, job.rep, cfg.seed, std::nullopt, std::nullopt, 1.0};
    if (job.m == 0) return row;
    std::uint64_t covered = 0;
    std::uint64_t hi = 0;
    for (const auto& c : res.cover_round) {
      if (!c) continue;
      ++covered;
      hi = std::max(hi, *c);
      row.min_cover = row.min_cover ? std::min(*row.min_cover, *c) : *c;
    }
    row.covered_fraction = static_cast<double>(covered) / static_cast<double>(job.m);
    if (covered == static_cast<std::uint64_t>(job.m)) row.max_cover = hi;
    return row;
  });
}

ResultTable to_table(const std::vector<MaxLoadRow>& rows) {
  ResultTable t{"max_load", {"n", "m", "rounds", "rep", "seed", "max_load", "normalized"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.n), std::to_string(r.m), std::to_string(r.rounds),
                      std::to_string(r.rep), std::to_string(r.seed), std::to_string(r.max_load),
                      format_optional(r.normalized)});
  }
  return t;
}

ResultTable to_table(const std::vector<EmptyFractionRow>& rows) {
  ResultTable t{"empty_fraction",
                {"n", "m", "rounds", "burn_in", "rep", "seed", "mean_f", "ci_low", "ci_high"},
                {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.n), std::to_string(r.m), std::to_string(r.rounds),
                      std::to_string(r.burn_in), std::to_string(r.rep), std::to_string(r.seed),
                      format_double(r.mean_f), format_double(r.ci_low), format_double(r.ci_high)});
  }
  return t;
}

ResultTable to_table(const std::vector<ConvergenceRow>& rows) {
  ResultTable t{"convergence",
                {"n", "m", "threshold", "rep", "seed", "rounds_to_converge", "capped"},
                {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.n), std::to_string(r.m), format_double(r.threshold),
                      std::to_string(r.rep), std::to_string(r.seed),
                      format_optional(r.rounds_to_converge), r.capped ? "1" : "0"});
  }
  return t;
}

ResultTable to_table(const std::vector<TraversalRow>& rows) {
  ResultTable t{"traversal",
                {"n", "m", "rep", "seed", "max_cover", "min_cover", "covered_fraction"},
                {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.n), std::to_string(r.m), std::to_string(r.rep),
                      std::to_string(r.seed), format_optional(r.max_cover),
                      format_optional(r.min_cover), format_double(r.covered_fraction)});
  }
  return t;
}

ResultTable run_experiment(ExperimentKind kind, const ExperimentConfig& cfg) {
  switch (kind) {
    case ExperimentKind::kMaxLoad: return to_table(experiment_max_load(cfg));
    case ExperimentKind::kEmptyFraction: return to_table(experiment_empty_fraction(cfg));
    case ExperimentKind::kConvergence: return to_table(experiment_convergence(cfg));
    case ExperimentKind::kTraversal: return to_table(experiment_traversal(cfg));
  }
  throw std::invalid_argument("unknown experiment");
}

namespace {

std::string measured_column(const std::string& experiment) {
  if (experiment == "max_load") return "max_load";
  if (experiment == "empty_fraction") return "mean_f";
  if (experiment == "convergence") return "rounds_to_converge";
  if (experiment == "traversal") return "max_cover";
  throw std::invalid_argument("no summary for experiment '" + experiment + "'");
}

}  // namespace

ResultTable summarize(const ResultTable& table) {
  const std::string measured = measured_column(table.experiment);
  const std::size_t cn = table.column("n");
  const std::size_t cm = table.column("m");
  const std::size_t cv = table.column(measured);
  struct Acc {
    std::uint64_t reps = 0;
    std::uint64_t measured = 0;
    double sum = 0.0;
  };
  std::map<std::pair<long long, long long>, Acc> acc;
  for (const auto& row : table.rows) {
    auto& a = acc[{std::stoll(row[cn]), std::stoll(row[cm])}];
    ++a.reps;
    if (row[cv].empty()) continue;
    ++a.measured;
    a.sum += std::stod(row[cv]);
  }
  ResultTable out{table.experiment + "_summary", {"n", "m", "reps", "measured", "mean"}, {}};
  for (const auto& [key, a] : acc) {
    out.rows.push_back({std::to_string(key.first), std::to_string(key.second),
                        std::to_string(a.reps), std::to_string(a.measured),
                        a.measured ? format_double(a.sum / static_cast<double>(a.measured))
                                   : std::string{}});
  }
  return out;
}

}  // namespace rbb
