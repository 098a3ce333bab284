#include "rbb/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>

namespace rbb {

double RunningStats::standard_error() const noexcept {
  return count_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

double normal_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("normal_quantile: level in (0,1)");
  const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 0.5 + 0.5 * level);
}

ConfidenceInterval mean_interval(const RunningStats& stats, double level) {
  return ConfidenceInterval{stats.mean(), normal_quantile(level) * stats.standard_error(), level,
                            stats.count()};
}

ConfidenceInterval proportion_interval(std::uint64_t successes, std::uint64_t trials,
                                       double level) {
  if (trials == 0) return ConfidenceInterval{0.0, 0.5, level, 0};
  const double z = normal_quantile(level);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  // The Wilson interval lies inside [0, 1] by construction, so it is
  // reported around its own centre rather than the raw proportion.
  return ConfidenceInterval{centre, half, level, trials};
}

ConfidenceInterval batch_means_interval(std::span<const double> series, std::size_t batches,
                                        double level) {
  if (series.empty()) throw std::invalid_argument("batch_means_interval: empty series");
  batches = std::clamp<std::size_t>(batches, 1, series.size());
  const std::size_t per = series.size() / batches;
  RunningStats means;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t lo = b * per;
    const std::size_t hi = b + 1 == batches ? series.size() : lo + per;
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += series[i];
    means.add(sum / static_cast<double>(hi - lo));
  }
  double total = 0.0;
  for (double v : series) total += v;
  ConfidenceInterval ci = mean_interval(means, level);
  ci.mean = total / static_cast<double>(series.size());
  ci.samples = series.size();
  return ci;
}

double chi_square_sf(double statistic, std::uint64_t df) {
  if (df == 0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  const boost::math::chi_squared_distribution<double> dist(static_cast<double>(df));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double chi_square_critical(std::uint64_t df, double significance) {
  if (df == 0) return 0.0;
  const boost::math::chi_squared_distribution<double> dist(static_cast<double>(df));
  return boost::math::quantile(boost::math::complement(dist, significance));
}

}  // namespace rbb
