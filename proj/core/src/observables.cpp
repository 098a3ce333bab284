#include "rbb/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rbb {
namespace {

// Largest argument with a finite exp() in double precision.
constexpr double kMaxExpArgument = 709.0;

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void require_consecutive(std::span<const ObservationRow> trace) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].round != trace.front().round + i) {
      throw std::invalid_argument("trace rounds are not consecutive");
    }
  }
}

std::size_t position_of(std::span<const ObservationRow> trace, std::uint64_t round) {
  if (trace.empty() || round < trace.front().round ||
      round - trace.front().round >= trace.size()) {
    throw std::out_of_range("round " + std::to_string(round) + " outside trace");
  }
  return static_cast<std::size_t>(round - trace.front().round);
}

}  // namespace

EmptyStats empty_stats(const LoadVector& x) noexcept {
  const std::size_t empty = x.empty_bins();
  return EmptyStats{empty, x.n() - empty};
}

std::uint64_t quadratic_potential(const LoadVector& x) noexcept {
  std::uint64_t total = 0;
  for (Load v : x.loads()) {
    const auto u = static_cast<std::uint64_t>(v);
    total += u * u;
  }
  return total;
}

double exponential_potential(const LoadVector& x, double alpha, PotentialMode mode) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exponential_potential: alpha must be > 0");
  const double top = alpha * static_cast<double>(x.max_load());
  CompensatedSum acc;
  if (mode == PotentialMode::kLinear) {
    if (top > kMaxExpArgument) {
      throw std::overflow_error("exponential_potential: alpha * max_load = " + std::to_string(top) +
                                " overflows; use the log domain");
    }
    for (Load v : x.loads()) acc.add(std::exp(alpha * static_cast<double>(v)));
    return acc.value();
  }
  for (Load v : x.loads()) acc.add(std::exp(alpha * static_cast<double>(v) - top));
  return top + std::log(acc.value());
}

double quadratic_drift_bound(std::uint64_t upsilon, Load m, std::size_t n, std::size_t empty) {
  if (n == 0 || empty > n) throw std::invalid_argument("quadratic_drift_bound: need F <= n, n >= 1");
  const double nd = static_cast<double>(n);
  return static_cast<double>(upsilon) - 2.0 * (static_cast<double>(m) / nd) * static_cast<double>(empty) +
         2.0 * nd;
}

double exponential_drift_bound(double phi, double alpha, std::size_t n, std::size_t kappa) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exponential_drift_bound: alpha must be > 0");
  if (n == 0 || kappa > n) throw std::invalid_argument("exponential_drift_bound: need kappa <= n");
  const double growth =
      std::exp(std::expm1(alpha) * static_cast<double>(kappa) / static_cast<double>(n));
  return phi * std::exp(-alpha) * growth + static_cast<double>(n - kappa) * growth;
}

double log_exponential_drift_bound(double log_phi, double alpha, std::size_t n,
                                   std::size_t kappa) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exponential_drift_bound: alpha must be > 0");
  if (n == 0 || kappa > n) throw std::invalid_argument("exponential_drift_bound: need kappa <= n");
  const double log_growth = std::expm1(alpha) * static_cast<double>(kappa) / static_cast<double>(n);
  const double log_empty = kappa == n ? -std::numeric_limits<double>::infinity()
                                      : std::log(static_cast<double>(n - kappa));
  return log_add_exp(log_phi - alpha, log_empty) + log_growth;
}

double PotentialParams::log_threshold() const {
  return std::log(48.0) - 2.0 * std::log(alpha) + std::log(static_cast<double>(n));
}

PotentialParams PotentialParams::with_alpha(double new_alpha) const {
  if (!(new_alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  PotentialParams p = *this;
  p.alpha = new_alpha;
  p.threshold = 48.0 / (new_alpha * new_alpha) * static_cast<double>(n);
  return p;
}

PotentialParams default_params(std::size_t n, Load m, unsigned k) {
  if (n == 0 || m < 1 || k == 0) {
    throw std::invalid_argument("default_params: need n >= 1, m >= 1, k >= 1");
  }
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  PotentialParams p;
  p.n = n;
  p.m = m;
  p.c_r = 16.0 * 384.0 * 384.0 * 744.0 * 744.0;
  p.c_s = 8.0 * static_cast<double>(k) * p.c_r;
  p.gamma = nd / (4.0 * md);
  return p.with_alpha(nd / (2.0 * 384.0 * 744.0 * md));
}

double practical_alpha(std::size_t n, Load m) {
  if (n == 0 || m < 1) throw std::invalid_argument("practical_alpha: need n >= 1, m >= 1");
  return static_cast<double>(n) / (8.0 * static_cast<double>(m));
}

double AdjustedSeries::value(std::size_t j) const {
  return stopped.at(j) ? 0.0 : std::exp(log_values.at(j));
}

AdjustedSeries adjusted_potential_series(std::span<const ObservationRow> trace, std::uint64_t t0,
                                         const PotentialParams& params) {
  require_consecutive(trace);
  const std::size_t start = position_of(trace, t0);
  const double alpha = params.alpha;
  const double log_threshold = params.log_threshold();
  const double penalty = 1.5 * alpha * alpha;

  AdjustedSeries series;
  series.t0 = t0;
  const std::size_t len = trace.size() - start;
  series.log_values.reserve(len);
  series.stopped.reserve(len);
  series.empty_aggregate.reserve(len);

  const double bins = static_cast<double>(params.n);
  std::uint64_t aggregate = 0;
  bool dead = false;
  for (std::size_t j = 0; j < len; ++j) {
    const ObservationRow& row = trace[start + j];
    if (!row.exponential || !row.empty) {
      throw std::invalid_argument("adjusted_potential_series: trace rows need Phi and empty stats");
    }
    if (row.exponential->alpha != alpha) {
      throw std::invalid_argument("adjusted_potential_series: trace alpha differs from params");
    }
    if (row.empty->bins() != params.n) {
      throw std::invalid_argument("adjusted_potential_series: trace n differs from params");
    }
    // sum_{t<t0+j} (alpha f^t - 1.5 alpha^2), with the F^t summed exactly first.
    const double log_weight =
        alpha * static_cast<double>(aggregate) / bins - penalty * static_cast<double>(j);
    series.stopped.push_back(dead);
    series.log_values.push_back(dead ? -std::numeric_limits<double>::infinity()
                                     : row.exponential->log_phi + log_weight);
    series.empty_aggregate.push_back(aggregate);

    if (!dead && row.exponential->log_phi <= log_threshold) {
      dead = true;
      series.stop_round = row.round;
    }
    aggregate += row.empty->empty;
  }
  return series;
}

std::uint64_t aggregate_empty(std::span<const ObservationRow> trace, std::uint64_t t0,
                              std::uint64_t t1) {
  if (t0 > t1) throw std::out_of_range("aggregate_empty: t0 > t1");
  require_consecutive(trace);
  const std::size_t a = position_of(trace, t0);
  const std::size_t b = position_of(trace, t1);
  std::uint64_t total = 0;
  for (std::size_t i = a; i <= b; ++i) {
    if (!trace[i].empty) throw std::invalid_argument("aggregate_empty: row lacks empty stats");
    total += trace[i].empty->empty;
  }
  return total;
}

}  // namespace rbb
