#pragma once

#include <cstdint>
#include <random>

namespace accsim::rng {

/// Substream indices split off the master seed.
inline constexpr std::uint64_t kAttackStream = 1;
inline constexpr std::uint64_t kIdsStream = 2;

/// SplitMix64 finalizer applied to master + (index+1)*golden-gamma, i.e. the
/// index-th output of a SplitMix64 counter started at `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Private random stream. std::mt19937_64 output is fully specified by the
/// standard; the uniform mapping below is ours so results are identical
/// across standard library implementations.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// One Bernoulli(p) draw; always consumes exactly one engine output.
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace accsim::rng
