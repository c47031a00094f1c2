#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace flash {

// All randomized operations draw from mt19937_64 through the helpers below.
// The standard distributions are implementation-defined, so seeded runs would
// not be reproducible across standard libraries; these are.
using Rng = std::mt19937_64;

// Uniform integer in [lo, hi], inclusive. Rejection on the top bits keeps the
// draw exactly uniform.
inline std::uint64_t uniform_u64(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;  // hi >= lo; span==0 means full range
  if (span == 0) return rng();
  const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % span);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit && limit != 0);
  return lo + x % span;
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return int(uniform_u64(rng, std::uint64_t(0), std::uint64_t(hi - lo))) + lo;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Standard normal via Box-Muller (polar form avoided to keep draw count fixed).
inline double normal(Rng& rng) {
  double u1 = uniform_unit(rng);
  while (u1 <= 0.0) u1 = uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace flash
