#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rbb/load_vector.hpp"

namespace rbb {

/// Empty-bin statistics of one configuration: F (empty), kappa (non-empty).
struct EmptyStats {
  std::size_t empty = 0;
  std::size_t nonempty = 0;

  std::size_t bins() const noexcept { return empty + nonempty; }
  /// f = F / n, evaluated only at reporting time.
  double fraction() const noexcept {
    return bins() == 0 ? 0.0 : static_cast<double>(empty) / static_cast<double>(bins());
  }

  friend bool operator==(const EmptyStats&, const EmptyStats&) = default;
};

EmptyStats empty_stats(const LoadVector& x) noexcept;

/// Sum of squared loads. Exact for any vector within the ball cap.
std::uint64_t quadratic_potential(const LoadVector& x) noexcept;

enum class PotentialMode { kLinear, kLogDomain };

/// Sum_i exp(alpha * x_i). In kLogDomain the natural log of the sum is
/// returned, computed with a max shift so it never overflows. kLinear throws
/// std::overflow_error when alpha * max_load leaves the double range.
double exponential_potential(const LoadVector& x, double alpha,
                             PotentialMode mode = PotentialMode::kLogDomain);

inline double log_exponential_potential(const LoadVector& x, double alpha) {
  return exponential_potential(x, alpha, PotentialMode::kLogDomain);
}

/// Upper bound on E[Upsilon^{t+1} | x^t]: Upsilon - 2 (m/n) F + 2n.
double quadratic_drift_bound(std::uint64_t upsilon, Load m, std::size_t n, std::size_t empty);

/// Upper bound on E[Phi^{t+1} | x^t]:
///   Phi e^{-alpha} e^{(e^alpha - 1) kappa / n} + (n - kappa) e^{(e^alpha - 1) kappa / n}.
double exponential_drift_bound(double phi, double alpha, std::size_t n, std::size_t kappa);

/// Same bound, taking and returning natural logs.
double log_exponential_drift_bound(double log_phi, double alpha, std::size_t n,
                                   std::size_t kappa);

/// Parameters of the exponential and adjusted potentials.
struct PotentialParams {
  std::size_t n = 1;
  Load m = 1;
  double alpha = 1.0;
  /// Stabilization level 48 / alpha^2 * n.
  double threshold = 48.0;
  double c_r = 0.0;
  double c_s = 0.0;
  /// Lower-bound constant n / (4m).
  double gamma = 0.0;

  double log_threshold() const;

  /// Copy with a different alpha; the threshold follows alpha.
  PotentialParams with_alpha(double new_alpha) const;
};

/// Constants from the stabilization analysis, verbatim:
///   alpha = n / (2 * 384 * 744 * m), c_r = 16 * 384^2 * 744^2,
///   c_s = 8k * c_r, gamma = n / (4m).
/// Throws std::invalid_argument unless n >= 1, m >= 1, k >= 1.
PotentialParams default_params(std::size_t n, Load m, unsigned k = 1);

/// Desk-scale smoothing parameter n / (8m) used by the statistical checks;
/// the analytic alpha makes the stopping event hold at every desk-scale state.
double practical_alpha(std::size_t n, Load m);

inline PotentialParams practical_params(std::size_t n, Load m, unsigned k = 1) {
  return default_params(n, m, k).with_alpha(practical_alpha(n, m));
}

/// Phi recorded together with the alpha it was evaluated at.
struct ExponentialObs {
  double alpha = 0.0;
  double log_phi = 0.0;

  friend bool operator==(const ExponentialObs&, const ExponentialObs&) = default;
};

/// Per-round snapshot emitted by run_trace. Fields are present when the
/// corresponding observer was selected.
struct ObservationRow {
  std::uint64_t round = 0;
  Load balls = 0;
  std::optional<EmptyStats> empty;
  std::optional<std::uint64_t> quadratic;
  std::optional<ExponentialObs> exponential;
  std::optional<Load> max_load;

  friend bool operator==(const ObservationRow&, const ObservationRow&) = default;
};

/// Largest load certified by a potential value: (1/alpha) * ln Phi.
inline double max_load_certificate(double log_phi, double alpha) { return log_phi / alpha; }

/// Adjusted exponential potential anchored at t0.
///
/// Entry j describes round t0 + j:
///   value_j = 1{no stop in [t0, t0 + j)} * Phi^{t0+j} * exp(sum_{t=t0}^{t0+j-1} (alpha f^t - 1.5 alpha^2))
/// where a stop at round t means Phi^t <= 48/alpha^2 * n.
struct AdjustedSeries {
  std::uint64_t t0 = 0;
  /// ln(value_j); -infinity once the series has been zeroed.
  std::vector<double> log_values;
  /// True iff value_j is zero because a stop occurred in [t0, t0 + j).
  std::vector<bool> stopped;
  /// Running empty-bin aggregate F_{t0}^{t0+j-1} (0 for j = 0).
  std::vector<std::uint64_t> empty_aggregate;
  /// First round >= t0 with Phi <= threshold, if any within the trace.
  std::optional<std::uint64_t> stop_round;

  std::size_t size() const noexcept { return log_values.size(); }
  double value(std::size_t j) const;
};

/// Builds the adjusted series from a trace whose rows carry empty stats and
/// Phi evaluated at params.alpha. Throws std::invalid_argument otherwise and
/// std::out_of_range if t0 lies outside the trace.
AdjustedSeries adjusted_potential_series(std::span<const ObservationRow> trace, std::uint64_t t0,
                                         const PotentialParams& params);

/// Inclusive sum of F^t over rounds [t0, t1]. Throws std::out_of_range.
std::uint64_t aggregate_empty(std::span<const ObservationRow> trace, std::uint64_t t0,
                              std::uint64_t t1);

}  // namespace rbb
