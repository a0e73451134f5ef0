// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "olion/matrix.hpp"

namespace olion {

/// splitmix64 mix step; used to derive independent stream seeds.
inline uint64_t mix_seed(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
  return mix_seed(base ^ mix_seed(stream));
}

/// Deterministic RNG: mt19937_64 with explicit uniform/Box-Muller transforms
/// so draws do not depend on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (both values used, in order).
  double normal();

  uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n).
  uint64_t below(uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// rows x cols matrix of i.i.d. N(0, stddev^2) entries, filled row-major.
Matrix gaussian_matrix(int rows, int cols, Rng& rng, double stddev = 1.0);
Matrix gaussian_matrix(int rows, int cols, uint64_t seed, double stddev = 1.0);

}  // namespace olion
