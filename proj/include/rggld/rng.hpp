#pragma once

#include <cstdint>
#include <random>

namespace rggld {

/// SplitMix64 finaliser; used to derive independent seeds from (seed, index).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seedable 64-bit generator. Streams derived with `stream()` are
/// independent of each other and of the order in which they are created.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng stream(std::uint64_t seed, std::uint64_t index, std::uint64_t lane = 0);

  std::uint64_t next() { return engine_(); }

  // 53 random mantissa bits, so the result is always in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rggld
