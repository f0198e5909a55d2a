#pragma once

// Seed derivation and the small set of sampling primitives the simulator uses.
//
// One master seed fans out into independent per-purpose streams through a
// counter-based splitmix64 mix, so e.g. changing how agents are scheduled
// never perturbs the graph drawn for the same replication.

#include <cstdint>
#include <random>

namespace currsim {

using Rng = std::mt19937_64;

/// Independent random streams used by one replication.
enum class Stream : std::uint64_t {
  graph = 1,
  selection = 2,
  tie_break = 3,
  weights = 4,
  monte_carlo = 5,
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Child seed for `key` under `parent`. Distinct keys give unrelated seeds and
/// the mapping does not depend on how many other children were derived.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) noexcept {
  return mix64(mix64(parent) ^ mix64(key + 0xD1B54A32D192ED03ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, Stream stream) noexcept {
  return derive_seed(parent, static_cast<std::uint64_t>(stream));
}

/// Seed of replication `replication` at sweep point `point`.
constexpr std::uint64_t replication_seed(std::uint64_t master, std::uint64_t point,
                                         std::uint64_t replication) noexcept {
  return derive_seed(derive_seed(master, point), replication);
}

Rng make_rng(std::uint64_t seed);

/// Uniform integer in [0, bound), bound > 0. Unbiased (rejection sampling) and
/// identical across standard library implementations.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace currsim
