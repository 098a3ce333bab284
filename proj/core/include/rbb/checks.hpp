#pragma once

// Named check registry behind `rbb check`. Every entry expands to one or
// more CheckReports; names starting with "negative_control" are expected to
// fail and exist to show the checks are not vacuous.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rbb/table.hpp"
#include "rbb/validation.hpp"

namespace rbb {

/// Checks run when the selection is empty.
std::vector<std::string> default_check_suite();
/// Every registered name, default suite first.
std::vector<std::string> registered_checks();

/// Throws std::invalid_argument on an unknown name (before running anything).
std::vector<CheckReport> run_checks(const std::vector<std::string>& selection, std::uint64_t seed);

/// Columns: name,verdict,statistic,threshold,seed.
ResultTable checks_table(const std::vector<CheckReport>& reports);

bool all_passed(const std::vector<CheckReport>& reports);

/// Sampler that sends an extra `bias` fraction of draws to bin 0.
struct BiasedSampler {
  RandomSource base;
  double bias = 0.1;

  std::uint64_t below(std::uint64_t bound) {
    if (base.uniform01() < bias) return 0;
    return base.below(bound);
  }
};

/// Uniformly random configuration: m balls thrown independently into n bins.
LoadVector random_config(std::size_t n, Load m, RandomSource& rng);

}  // namespace rbb
