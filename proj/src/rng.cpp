#include "rggld/rng.hpp"

#include <array>

namespace rggld {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) {
  std::array<std::uint32_t, 4> words{};
  std::uint64_t s = seed;
  for (std::size_t i = 0; i < words.size(); i += 2) {
    s = splitmix64(s);
    words[i] = static_cast<std::uint32_t>(s);
    words[i + 1] = static_cast<std::uint32_t>(s >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) {
  return Rng(splitmix64(splitmix64(seed ^ splitmix64(index)) + lane * 0xd1b54a32d192ed03ULL));
}

}  // namespace rggld
