#include "currsim/seeding.hpp"

#include <limits>

namespace currsim {

Rng make_rng(std::uint64_t seed) {
  // Expand the 64-bit seed so nearby seeds do not start in correlated states.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(mix64(seed)),
                    static_cast<std::uint32_t>(mix64(seed) >> 32)};
  return Rng(seq);
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // Reject the top partial bucket.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace currsim
