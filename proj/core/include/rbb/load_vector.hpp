#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rbb {

using Load = std::int64_t;

/// Largest supported ball count. Keeps the quadratic potential (at most m^2)
/// inside an unsigned 64-bit integer.
inline constexpr Load kMaxBalls = (Load{1} << 32) - 1;

/// Bin occupancies x_1..x_n plus the cached ball total.
///
/// Bins are indexed from 0 in code; CSV state strings print the loads in bin
/// order so the indexing convention never leaks into files.
class LoadVector {
 public:
  LoadVector() = default;

  /// Validates non-negativity and the ball cap. Throws std::invalid_argument.
  explicit LoadVector(std::vector<Load> loads);

  static LoadVector zeros(std::size_t n);

  std::size_t n() const noexcept { return loads_.size(); }
  Load m() const noexcept { return total_; }

  Load operator[](std::size_t i) const noexcept { return loads_[i]; }
  std::span<const Load> loads() const noexcept { return loads_; }

  Load max_load() const noexcept;

  /// Number of bins with load zero.
  std::size_t empty_bins() const noexcept;

  /// "2,0,1" style rendering used by CSV outputs.
  std::string to_string() const;

  /// Parses "2,0,1" or whitespace separated loads.
  static LoadVector parse(const std::string& text);

  friend bool operator==(const LoadVector&, const LoadVector&) = default;
  friend auto operator<=>(const LoadVector& a, const LoadVector& b) {
    return a.loads_ <=> b.loads_;
  }

  /// Raw mutable access for the step kernels; callers must keep total() in
  /// sync through recount() or the kernels' own bookkeeping.
  std::vector<Load>& mutable_loads() noexcept { return loads_; }
  void set_total(Load m) noexcept { total_ = m; }
  void recount();

 private:
  std::vector<Load> loads_;
  Load total_ = 0;
};

/// Destinations drawn in one round, in the order they were consumed.
/// Entry j is the bin (0-based) receiving the ball removed from the j-th
/// non-empty bin in ascending bin order.
struct SampleBatch {
  std::vector<std::size_t> destinations;
  std::uint64_t round = 0;
};

enum class InitKind { kUniform, kSingleBin, kExplicit };

/// Starting configuration of a process.
struct InitialConfig {
  InitKind kind = InitKind::kUniform;
  std::optional<std::vector<Load>> explicit_loads;

  static InitialConfig uniform() { return {InitKind::kUniform, std::nullopt}; }
  static InitialConfig single_bin() { return {InitKind::kSingleBin, std::nullopt}; }
  static InitialConfig from_loads(std::vector<Load> loads) {
    return {InitKind::kExplicit, std::move(loads)};
  }

  /// Materializes the configuration for n bins and m balls.
  /// uniform: floor(m/n) per bin, remainder one each to the lowest indices.
  /// single_bin: all m balls in the first bin.
  /// explicit: the given loads, which must have length n and sum to m.
  LoadVector build(std::size_t n, Load m) const;
};

}  // namespace rbb
