#pragma once

#include <cmath>
#include <cstdint>

// Counter-based splittable randomness. Every random decision in the library
// is a pure function of (seed, stream identifiers), so results are
// reproducible regardless of evaluation order and across platforms.

namespace sparsify::rng {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Mixes a seed with up to three stream coordinates (e.g. edge index, round).
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(seed ^ 0xD1B54A32D192ED03ULL);
  h = splitmix64(h ^ splitmix64(a));
  h = splitmix64(h ^ splitmix64(b ^ 0x8CB92BA72F3D8DD7ULL));
  h = splitmix64(h ^ splitmix64(c ^ 0xEB44ACCAB455D165ULL));
  return h;
}

// Independent sub-seed for a named child stream.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
  return mix(seed, tag, 0x6A09E667F3BCC909ULL);
}

// Fair coin for variable `idx` in resampling round `round`.
inline bool coin(std::uint64_t seed, std::uint64_t idx, std::uint64_t round) {
  return (mix(seed, idx, round) >> 63) != 0;
}

// Uniform double in [0,1).
inline double uniform01(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return static_cast<double>(mix(seed, a, b) >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by rejection; bound must be positive.
inline std::uint64_t uniform_below(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                   std::uint64_t bound) {
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t ctr = 0;
  for (;;) {
    std::uint64_t v = mix(seed, a, b, ctr++);
    if (v < limit) return v % bound;
  }
}

// Standard normal via Box-Muller on counter-derived uniforms.
inline double normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  double u1 = uniform01(seed, a, b ^ 0x1ULL);
  double u2 = uniform01(seed, a, b ^ 0x2ULL);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace sparsify::rng
