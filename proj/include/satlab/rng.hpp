#pragma once

#include <cstdint>
#include <random>

#include "satlab/grid.hpp"

// Deterministic sampling helpers. All randomized checks in the project take
// an explicit seed and reproduce bit-identically for a fixed build.

namespace satlab {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) drawn portably from the raw 64-bit stream.
inline double canonical(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * canonical(rng);
}

/// Grid function with iid uniform samples in [-amplitude, amplitude].
GridFunction rough_profile(Rng& rng, std::size_t n, double amplitude);

/// Truncated random Fourier sum with `modes` harmonics, scaled so the sup
/// norm is roughly `amplitude`.
GridFunction smooth_profile(Rng& rng, std::size_t n, double amplitude, int modes = 4);

/// Rescales g so its L2 norm equals `target` (no-op for the zero function).
GridFunction scaled_to_l2(const GridFunction& g, double target);

}  // namespace satlab
