#include "rbb/checks.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace rbb {

LoadVector random_config(std::size_t n, Load m, RandomSource& rng) {
  return one_choice_run(n, m, rng);
}

namespace {

using Suite = std::function<std::vector<CheckReport>(std::uint64_t)>;

// Each check family owns a stream id so adding a family never shifts another.
RandomSource stream(std::uint64_t seed, std::uint64_t family, std::uint64_t item = 0) {
  return RandomSource(seed, stream_key(0xC4EC, family, item));
}

std::vector<LoadVector> tiny_states() {
  std::vector<LoadVector> out;
  for (std::size_t n = 1; n <= kExactMaxBins; ++n) {
    for (Load m = 1; m <= kExactMaxBalls; ++m) {
      for (const auto& s : enumerate_states(n, m).states) out.push_back(s);
    }
  }
  return out;
}

std::vector<CheckReport> quadratic_drift_suite(std::uint64_t seed, std::size_t random_configs,
                                               std::uint64_t samples, double offset) {
  std::vector<CheckReport> out;
  if (offset == 0.0) {
    for (const auto& s : tiny_states()) out.push_back(check_quadratic_drift(s, 0, stream(seed, 1)));
  }
  RandomSource cfg_rng = stream(seed, 1, 1);
  for (std::size_t i = 0; i < random_configs; ++i) {
    const LoadVector x = random_config(50, 200, cfg_rng);
    out.push_back(check_quadratic_drift(x, samples, stream(seed, 1, 100 + i), offset));
  }
  return out;
}

std::vector<CheckReport> exponential_drift_suite(std::uint64_t seed, std::size_t random_configs,
                                                 std::uint64_t samples, double scale) {
  std::vector<CheckReport> out;
  if (scale == 1.0) {
    for (double alpha : {0.05, 0.1, 0.5}) {
      for (const auto& s : tiny_states()) {
        out.push_back(check_exponential_drift(s, alpha, 0, stream(seed, 2)));
      }
    }
  }
  RandomSource cfg_rng = stream(seed, 2, 1);
  const double alpha = practical_alpha(50, 200);
  for (std::size_t i = 0; i < random_configs; ++i) {
    const LoadVector x = random_config(50, 200, cfg_rng);
    out.push_back(check_exponential_drift(x, alpha, samples, stream(seed, 2, 100 + i), scale));
  }
  return out;
}

// The practical alpha keeps Phi below the stopping threshold from the
// start, so the series is stopped at t0 = 0 and every sampled round is
// trivial. alpha = 0.2 keeps it alive for tens of rounds and exercises the
// branching estimate for real.
constexpr double kLiveSupermartingaleAlpha = 0.2;

std::vector<CheckReport> supermartingale_suite(std::uint64_t seed, std::uint64_t samples,
                                               double perturbation) {
  SupermartingaleSpec spec;
  spec.log_perturbation = perturbation;
  std::vector<CheckReport> out;
  if (perturbation == 0.0) {
    out.push_back(check_supermartingale(spec, 0, practical_params(spec.n, spec.m), samples,
                                        stream(seed, 3)));
  }
  out.push_back(check_supermartingale(
      spec, 0, default_params(spec.n, spec.m).with_alpha(kLiveSupermartingaleAlpha), samples,
      stream(seed, 3, 1)));
  return out;
}

std::vector<CheckReport> drift_lemma_suite(std::uint64_t seed, std::uint64_t reps) {
  std::vector<CheckReport> out;
  out.push_back(check_drift_lemmas({1000, 1, 2, 1.0, WalkLaw::kSymmetric, 0}, reps, stream(seed, 6)));
  out.push_back(check_drift_lemmas({1000, 3, 6, 1.0, WalkLaw::kSymmetric, 0}, reps, stream(seed, 6, 1)));
  out.push_back(check_drift_lemmas({1000, 2, 4, std::exp(-2.0), WalkLaw::kIdealizedSingleBin, 10},
                                   reps, stream(seed, 6, 2)));
  return out;
}

const std::map<std::string, Suite>& registry() {
  static const std::map<std::string, Suite> table = {
      {"binomial_bound", [](std::uint64_t) { return std::vector{check_binomial_bound(8, 128)}; }},
      {"quadratic_drift",
       [](std::uint64_t seed) { return quadratic_drift_suite(seed, 5, 10'000, 0.0); }},
      {"exponential_drift",
       [](std::uint64_t seed) { return exponential_drift_suite(seed, 5, 10'000, 1.0); }},
      {"supermartingale",
       [](std::uint64_t seed) { return supermartingale_suite(seed, 2000, 0.0); }},
      {"coupling_dominance",
       [](std::uint64_t seed) {
         return std::vector{check_coupling_dominance(64, 256, 1000, 100, stream(seed, 4))};
       }},
      {"quadratic_change",
       [](std::uint64_t seed) {
         return std::vector{check_quadratic_change(InitialConfig::uniform().build(100, 1000),
                                                   10'000, stream(seed, 5))};
       }},
      {"drift_lemmas", [](std::uint64_t seed) { return drift_lemma_suite(seed, 10'000); }},
      {"one_choice",
       [](std::uint64_t seed) { return std::vector{check_one_choice(1000, 1.0, 100, stream(seed, 7))}; }},
      {"chi_square_step",
       [](std::uint64_t seed) {
         std::vector<CheckReport> out;
         std::uint64_t i = 0;
         for (const auto& loads : {std::vector<Load>{2, 1}, {1, 1, 2}, {4, 0, 0}, {3}}) {
           out.push_back(chi_square_step(LoadVector(loads), 100'000, stream(seed, 8, i++)));
         }
         return out;
       }},
      // Perturbed bounds or processes; each must fail.
      {"negative_control_quadratic_drift",
       [](std::uint64_t seed) { return quadratic_drift_suite(seed, 1, 10'000, -100.0); }},
      {"negative_control_exponential_drift",
       [](std::uint64_t seed) { return exponential_drift_suite(seed, 1, 10'000, 0.98); }},
      {"negative_control_supermartingale",
       [](std::uint64_t seed) { return supermartingale_suite(seed, 2000, 0.1); }},
      {"negative_control_coupling",
       [](std::uint64_t seed) {
         return std::vector{check_coupling_dominance(64, 256, 1000, 10, stream(seed, 4), true)};
       }},
      {"negative_control_binomial_bound",
       [](std::uint64_t) { return std::vector{check_binomial_bound(8, 128, 1.5)}; }},
      {"negative_control_drift_lemmas",
       [](std::uint64_t seed) {
         return std::vector{
             check_drift_lemmas({1000, 3, 6, 1.0, WalkLaw::kBiasedUp, 0}, 10'000, stream(seed, 6))};
       }},
      {"negative_control_chi_square",
       [](std::uint64_t seed) {
         BiasedSampler sampler{stream(seed, 8), 0.05};
         return std::vector{chi_square_step_with(LoadVector({2, 1}), 100'000, sampler, seed)};
       }},
  };
  return table;
}

}  // namespace

std::vector<std::string> default_check_suite() {
  return {"binomial_bound",     "quadratic_drift", "exponential_drift",
          "supermartingale",    "coupling_dominance", "quadratic_change",
          "drift_lemmas",       "one_choice",      "chi_square_step"};
}

std::vector<std::string> registered_checks() {
  std::vector<std::string> names = default_check_suite();
  for (const auto& [name, suite] : registry()) {
    if (name.rfind("negative_control", 0) == 0) names.push_back(name);
  }
  return names;
}

std::vector<CheckReport> run_checks(const std::vector<std::string>& selection, std::uint64_t seed) {
  const std::vector<std::string> names = selection.empty() ? default_check_suite() : selection;
  const auto& reg = registry();
  for (const auto& name : names) {
    if (!reg.count(name)) throw std::invalid_argument("unknown check '" + name + "'");
  }
  std::vector<CheckReport> out;
  for (const auto& name : names) {
    for (auto& r : reg.at(name)(seed)) {
      r.seed = seed;
      out.push_back(std::move(r));
    }
  }
  return out;
}

ResultTable checks_table(const std::vector<CheckReport>& reports) {
  ResultTable t{"checks", {"name", "verdict", "statistic", "threshold", "seed"}, {}};
  for (const auto& r : reports) {
    // Names carry commas inside brackets; swap them so the CSV stays flat.
    std::string name = r.name;
    for (char& c : name) {
      if (c == ',') c = ';';
    }
    t.rows.push_back({name, to_string(r.verdict), format_double(r.statistic),
                      format_double(r.threshold), std::to_string(r.seed)});
  }
  return t;
}

bool all_passed(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) {
    if (!r.passed()) return false;
  }
  return true;
}

}  // namespace rbb
