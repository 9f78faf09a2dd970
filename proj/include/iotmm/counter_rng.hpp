#pragma once

#include <cstdint>

namespace iotmm {

// SplitMix64 finalizer. Bijective on 64-bit words with strong avalanche.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Stateless counter-based uniform stream keyed by (seed, path, cell).
//
// Every draw is a pure function of its coordinates, so partitioning paths
// across any number of workers, in any order, reproduces the same numbers
// bit for bit. The mixing chain is fixed:
//
//   bits(path, cell) = splitmix64(splitmix64(splitmix64(seed) ^ path) ^ cell)
//   uniform(path, cell) = (bits >> 11) * 2^-53        (in [0, 1))
//
// Committed golden reports depend on this exact construction; changing it is
// a breaking schema change.
class CounterStream {
 public:
  explicit constexpr CounterStream(std::uint64_t seed) : seed_hash_(splitmix64(seed)) {}

  constexpr std::uint64_t bits(std::uint64_t path, std::uint64_t cell) const {
    return splitmix64(splitmix64(seed_hash_ ^ path) ^ cell);
  }

  constexpr double uniform(std::uint64_t path, std::uint64_t cell) const {
    return static_cast<double>(bits(path, cell) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_hash_;
};

}  // namespace iotmm
