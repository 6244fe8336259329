#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace bnsl {

// The random stream threaded through every randomized routine.
using Rng = std::mt19937_64;

// Uniform index in [0, n); n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace bnsl
