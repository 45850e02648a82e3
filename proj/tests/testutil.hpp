#pragma once

#include <cstdint>

#include "bolax/types.hpp"

namespace bolax::testing {

// deterministic xorshift generator for the property-style tests
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : state(seed) {}

  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (next() >> 11) * (1.0 / 9007199254740992.0);
  }

  Complex annulus(double r_lo, double r_hi) {
    const double r = uniform(r_lo, r_hi);
    const double a = uniform(0.0, kTwoPi);
    return std::polar(r, a);
  }
};

}  // namespace bolax::testing
