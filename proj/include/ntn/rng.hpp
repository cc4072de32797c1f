#pragma once

#include <cstdint>
#include <random>

// Deterministic randomness helpers. The raw mt19937_64 stream is consumed
// directly instead of std::uniform_*_distribution, whose output is
// implementation-defined; this keeps training logs byte-identical across
// standard libraries.

namespace ntn {

using Rng = std::mt19937_64;

// Uniform double in [0, 1), 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

// Uniform int in [0, n). Modulo bias is ~n / 2^64, far below anything the
// statistical tests can resolve.
inline int uniform_int(Rng& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

}  // namespace ntn
