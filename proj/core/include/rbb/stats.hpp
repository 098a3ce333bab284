#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace rbb {

/// mean +/- half_width at the given two-sided level.
struct ConfidenceInterval {
  double mean = 0.0;
  double half_width = 0.0;
  double level = 0.95;
  std::uint64_t samples = 0;

  double lower() const noexcept { return mean - half_width; }
  double upper() const noexcept { return mean + half_width; }
};

/// Welford accumulator.
class RunningStats {
 public:
  void add(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; 0 with fewer than two samples.
  double variance() const noexcept {
    return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
  }
  double standard_error() const noexcept;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Two-sided standard normal quantile for `level` (e.g. 1.96 at 0.95).
double normal_quantile(double level);

/// Normal-approximation interval for a sample mean.
ConfidenceInterval mean_interval(const RunningStats& stats, double level = 0.95);

/// Wilson score interval for a proportion; mean is the Wilson centre.
ConfidenceInterval proportion_interval(std::uint64_t successes, std::uint64_t trials,
                                       double level = 0.95);

/// Interval from batch means of an autocorrelated series: the series is cut
/// into `batches` contiguous blocks and the block means are treated as iid.
ConfidenceInterval batch_means_interval(std::span<const double> series, std::size_t batches = 20,
                                        double level = 0.95);

/// Upper-tail probability P[chi2_df >= statistic]. df = 0 gives 1.
double chi_square_sf(double statistic, std::uint64_t df);

/// Critical value c with P[chi2_df >= c] = significance. df = 0 gives 0.
double chi_square_critical(std::uint64_t df, double significance);

}  // namespace rbb
