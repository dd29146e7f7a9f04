#pragma once

#include <cstdint>
#include <random>

namespace fracvar {

// Uniform double in [lo, hi) from the top 53 bits of a 64-bit Mersenne
// twister draw. Unlike std::uniform_real_distribution the sequence is the
// same on every standard library.
inline double uniform(std::mt19937_64 &rng, double lo = 0.0, double hi = 1.0) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

} // namespace fracvar
