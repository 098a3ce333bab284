#include "rbb/exact_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rbb/observables.hpp"
#include "rbb/random.hpp"

namespace rbb {
namespace {

void compositions(std::size_t n, Load remaining, std::vector<Load>& prefix,
                  std::vector<LoadVector>& out) {
  if (prefix.size() + 1 == n) {
    prefix.push_back(remaining);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (Load v = 0; v <= remaining; ++v) {
    prefix.push_back(v);
    compositions(n, remaining - v, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

bool colex_less(const LoadVector& a, const LoadVector& b) noexcept {
  auto la = a.loads();
  auto lb = b.loads();
  return std::lexicographical_compare(la.rbegin(), la.rend(), lb.rbegin(), lb.rend());
}

std::size_t StateSpace::index_of(const LoadVector& x) const {
  auto it = index.find(std::vector<Load>(x.loads().begin(), x.loads().end()));
  if (it == index.end()) throw std::out_of_range("state " + x.to_string() + " not in space");
  return it->second;
}

std::uint64_t composition_count(std::size_t n, Load m) noexcept {
  if (n == 0) return 0;
  // C(m + n - 1, k) with k = min(n - 1, m), built incrementally.
  const auto top = static_cast<std::uint64_t>(m) + n - 1;
  const std::uint64_t k = std::min<std::uint64_t>(n - 1, static_cast<std::uint64_t>(m));
  uint128_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (top - k + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(c);
}

StateSpace enumerate_states(std::size_t n, Load m, std::size_t cap) {
  if (n == 0 || m < 0) throw std::invalid_argument("enumerate_states: need n >= 1, m >= 0");
  const std::uint64_t count = composition_count(n, m);
  if (count > cap) {
    throw std::length_error("enumerate_states: " + std::to_string(count) +
                            " states exceed the cap of " + std::to_string(cap));
  }
  StateSpace space;
  space.n = n;
  space.m = m;
  space.states.reserve(static_cast<std::size_t>(count));
  std::vector<Load> prefix;
  prefix.reserve(n);
  compositions(n, m, prefix, space.states);
  std::sort(space.states.begin(), space.states.end(), colex_less);
  for (std::size_t i = 0; i < space.states.size(); ++i) {
    const auto loads = space.states[i].loads();
    space.index.emplace(std::vector<Load>(loads.begin(), loads.end()), i);
  }
  return space;
}

double Distribution::probability_of(const LoadVector& x) const noexcept {
  for (const auto& o : outcomes) {
    if (o.state == x) return o.probability;
  }
  return 0.0;
}

double Distribution::total_probability() const noexcept {
  double total = 0.0;
  for (const auto& o : outcomes) total += o.probability;
  return total;
}

Distribution one_step_distribution(const LoadVector& x, std::uint64_t cap) {
  const std::size_t n = x.n();
  if (n == 0) throw std::invalid_argument("one_step_distribution: empty vector");
  std::vector<Load> base(x.loads().begin(), x.loads().end());
  std::size_t kappa = 0;
  for (Load& v : base) {
    if (v > 0) {
      --v;
      ++kappa;
    }
  }
  std::uint64_t tuples = 1;
  for (std::size_t j = 0; j < kappa; ++j) {
    if (tuples > cap / n) {
      throw std::length_error("one_step_distribution: n^kappa exceeds the cap of " +
                              std::to_string(cap));
    }
    tuples *= n;
  }
  if (tuples > cap) throw std::length_error("one_step_distribution: n^kappa exceeds cap");

  // Mixed-radix walk over destination tuples; `current` tracks base + arrivals.
  std::vector<std::size_t> digits(kappa, 0);
  std::vector<Load> current = base;
  if (kappa > 0) current[0] += static_cast<Load>(kappa);
  std::map<std::vector<Load>, std::uint64_t> counts;
  for (std::uint64_t t = 0; t < tuples; ++t) {
    ++counts[current];
    for (std::size_t j = 0; j < kappa; ++j) {
      --current[digits[j]];
      if (++digits[j] < n) {
        ++current[digits[j]];
        break;
      }
      digits[j] = 0;
      ++current[0];
    }
  }

  Distribution dist;
  dist.tuples = tuples;
  dist.outcomes.reserve(counts.size());
  for (auto& [loads, count] : counts) {
    dist.outcomes.push_back(Outcome{LoadVector(loads), count,
                                    static_cast<double>(count) / static_cast<double>(tuples)});
  }
  std::sort(dist.outcomes.begin(), dist.outcomes.end(),
            [](const Outcome& a, const Outcome& b) { return colex_less(a.state, b.state); });
  return dist;
}

TransitionKernel transition_kernel(const StateSpace& space, std::uint64_t cap) {
  TransitionKernel kernel;
  kernel.space = space;
  kernel.rows.resize(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Distribution dist = one_step_distribution(space.states[i], cap);
    auto& row = kernel.rows[i];
    row.reserve(dist.outcomes.size());
    for (const auto& o : dist.outcomes) row.emplace_back(space.index_of(o.state), o.probability);
    std::sort(row.begin(), row.end());
  }
  return kernel;
}

std::vector<std::size_t> reachable_states(const TransitionKernel& kernel, std::size_t start) {
  const std::size_t size = kernel.rows.size();
  if (start >= size) throw std::out_of_range("reachable_states: start index out of range");
  std::vector<bool> seen(size, false);
  std::deque<std::size_t> frontier{start};
  seen[start] = true;
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop_front();
    for (const auto& [j, p] : kernel.rows[i]) {
      if (p > 0.0 && !seen[j]) {
        seen[j] = true;
        frontier.push_back(j);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size; ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

namespace {

std::vector<double> apply_kernel(const TransitionKernel& kernel, const std::vector<double>& pi) {
  std::vector<double> next(pi.size(), 0.0);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] == 0.0) continue;
    for (const auto& [j, p] : kernel.rows[i]) next[j] += pi[i] * p;
  }
  return next;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace

StationaryResult stationary_distribution(const TransitionKernel& kernel,
                                         const StationaryOptions& options) {
  const StateSpace& space = kernel.space;
  if (space.size() == 0) throw std::invalid_argument("stationary_distribution: empty kernel");
  const LoadVector start = options.start ? *options.start
                                         : InitialConfig::uniform().build(space.n, space.m);
  StationaryResult result;
  result.reachable = reachable_states(kernel, space.index_of(start));
  const std::size_t size = space.size();

  if (options.method == StationaryMethod::kDenseSolve) {
    const std::size_t r = result.reachable.size();
    if (r > 2000) throw std::length_error("stationary_distribution: dense solve limited to 2000 states");
    std::vector<std::ptrdiff_t> local(size, -1);
    for (std::size_t a = 0; a < r; ++a) local[result.reachable[a]] = static_cast<std::ptrdiff_t>(a);
    // Solve pi (P - I) = 0 with the last balance equation replaced by sum(pi) = 1.
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    for (std::size_t a = 0; a < r; ++a) {
      for (const auto& [j, p] : kernel.rows[result.reachable[a]]) {
        if (local[j] < 0) continue;
        system(local[j], static_cast<Eigen::Index>(a)) += p;
      }
      system(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) -= 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r));
    system.row(static_cast<Eigen::Index>(r) - 1).setOnes();
    rhs(static_cast<Eigen::Index>(r) - 1) = 1.0;
    const Eigen::VectorXd solution = system.fullPivLu().solve(rhs);
    result.pi.assign(size, 0.0);
    for (std::size_t a = 0; a < r; ++a) result.pi[result.reachable[a]] = solution(static_cast<Eigen::Index>(a));
    result.residual = l1_distance(apply_kernel(kernel, result.pi), result.pi);
    result.iterations = 1;
    if (!(result.residual <= std::max(options.tol, 1e-9))) {
      throw std::runtime_error("stationary_distribution: dense solve residual " +
                               std::to_string(result.residual));
    }
    return result;
  }

  std::vector<double> pi(size, 0.0);
  const double uniform = 1.0 / static_cast<double>(result.reachable.size());
  for (std::size_t i : result.reachable) pi[i] = uniform;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    std::vector<double> next = apply_kernel(kernel, pi);
    const double residual = l1_distance(next, pi);
    if (residual <= options.tol) {
      result.pi = std::move(pi);
      result.iterations = it;
      result.residual = residual;
      return result;
    }
    for (std::size_t i = 0; i < size; ++i) pi[i] = 0.5 * (pi[i] + next[i]);
  }
  throw std::runtime_error("stationary_distribution: no convergence after " +
                           std::to_string(options.max_iterations) + " iterations");
}

double ObservableSelector::operator()(const LoadVector& x) const {
  switch (kind) {
    case ObservableKind::kEmpty:
      return static_cast<double>(x.empty_bins());
    case ObservableKind::kQuadratic:
      return static_cast<double>(quadratic_potential(x));
    case ObservableKind::kExponential:
      return exponential_potential(x, alpha, PotentialMode::kLinear);
    case ObservableKind::kMaxLoad:
      return static_cast<double>(x.max_load());
  }
  return 0.0;
}

double expected_observable(const Distribution& dist, const ObservableSelector& g) {
  double total = 0.0;
  for (const auto& o : dist.outcomes) total += o.probability * g(o.state);
  return total;
}

double expected_observable(const StateSpace& space, const std::vector<double>& pi,
                           const ObservableSelector& g) {
  if (pi.size() != space.size()) throw std::invalid_argument("expected_observable: size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] != 0.0) total += pi[i] * g(space.states[i]);
  }
  return total;
}

}  // namespace rbb
