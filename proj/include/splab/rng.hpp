#pragma once

#include <cstdint>
#include <random>

namespace splab {

using Engine = std::mt19937_64;

/// Purpose of a random stream. Distinct roles never share draws.
enum class StreamRole : std::uint64_t {
  kData = 1,
  kPrime = 2,
  kMultiplier = 3,
  kLimit = 4,
  kSigma = 5,
  kOperator = 6,
  kModel = 7,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the substream keyed by (master, role, a, b).
inline std::uint64_t derive_seed(std::uint64_t master, StreamRole role, std::uint64_t a = 0,
                                 std::uint64_t b = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(role));
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ (b + 0x632be59bd9b4e019ULL));
  return h;
}

inline Engine make_stream(std::uint64_t master, StreamRole role, std::uint64_t a = 0,
                          std::uint64_t b = 0) {
  return Engine(derive_seed(master, role, a, b));
}

}  // namespace splab
