#pragma once

#include <cstdint>
#include <random>

namespace mub {

/// Seedable random stream backed by std::mt19937_64.
///
/// Uniform and normal draws are computed here rather than through the
/// standard distribution classes so that a seed replays the same sequence on
/// every standard library. Independent streams for concurrent workers come
/// from `derive_seed(base, index)`.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

  /// Standard normal (Marsaglia polar method).
  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer over (base, index); used to give each restart its own stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

}  // namespace mub
