#pragma once

#include <cstdint>
#include <random>

namespace sepscan {

// splitmix64 step; advances state and returns the mixed value.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derive an independent stream seed from a master seed. Stream indices
// may be reused across runs with different masters without collision risk.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  return splitmix64(s);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  return std::mt19937_64(splitmix64(s));
}

// Uniform integer in [0, bound) without modulo bias.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  std::uniform_int_distribution<std::size_t> d(0, bound - 1);
  return d(rng);
}

}  // namespace sepscan
