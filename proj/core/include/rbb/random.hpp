#pragma once

#include <array>
#include <concepts>
#include <cstdint>

namespace rbb {

__extension__ typedef unsigned __int128 uint128_t;

/// SplitMix64 finalizer. Used for seed expansion and stream derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives the per-stream seed:
///   run_seed = splitmix64(master_seed ^ splitmix64(stream_id))
/// This mapping is part of the reproducibility contract and must not change.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                           std::uint64_t stream_id) noexcept {
  return splitmix64(master_seed ^ splitmix64(stream_id));
}

/// Combines several integers into a stream id (order sensitive).
constexpr std::uint64_t stream_key(std::uint64_t a, std::uint64_t b,
                                   std::uint64_t c = 0) noexcept {
  return splitmix64(splitmix64(splitmix64(a) ^ b) ^ c);
}

/// Seedable xoshiro256** generator keyed by (master_seed, stream_id).
///
/// The state is filled with four consecutive SplitMix64 outputs starting at
/// derive_stream_seed(master_seed, stream_id). Bounded integers use Lemire's
/// multiply-and-reject method, so the draw sequence is identical on every
/// platform with a 128-bit multiply (GCC and Clang on 64-bit targets).
class RandomSource {
 public:
  using result_type = std::uint64_t;

  explicit RandomSource(std::uint64_t master_seed = 42, std::uint64_t stream_id = 0) noexcept
      : master_seed_(master_seed), stream_id_(stream_id) {
    std::uint64_t s = derive_stream_seed(master_seed, stream_id);
    for (auto& word : state_) {
      s += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = s;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      word = z ^ (z >> 31);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Independent generator for a child stream, e.g. a tie-break stream.
  RandomSource substream(std::uint64_t child) const noexcept {
    return RandomSource(master_seed_, stream_key(stream_id_, child, 0x5EEDULL));
  }

  result_type operator()() noexcept { return next(); }

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    uint128_t product = static_cast<uint128_t>(next()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<uint128_t>(next()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Advances the state by 2^128 draws.
  void jump() noexcept {
    static constexpr std::array<std::uint64_t, 4> kJump = {
        0x180EC6D33CFD0ABAULL, 0xD5A61266F0C9392CULL, 0xA9582618E03FC9AAULL,
        0x39ABDC4529B1661CULL};
    std::array<std::uint64_t, 4> acc{};
    for (std::uint64_t word : kJump) {
      for (int b = 0; b < 64; ++b) {
        if (word & (std::uint64_t{1} << b)) {
          for (int i = 0; i < 4; ++i) acc[i] ^= state_[i];
        }
        next();
      }
    }
    state_ = acc;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> state_{};
};

/// Anything that can produce uniform bin indices.
template <typename G>
concept BinSampler = requires(G g, std::uint64_t n) {
  { g.below(n) } -> std::convertible_to<std::uint64_t>;
};

}  // namespace rbb
