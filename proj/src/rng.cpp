// SPDX-License-Identifier: Apache-2.0
#include "olion/rng.hpp"

#include <cmath>
#include <numbers>

namespace olion {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

uint64_t Rng::below(uint64_t n) {
  // Rejection sampling keeps the draw unbiased.
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x = 0;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

Matrix gaussian_matrix(int rows, int cols, Rng& rng, double stddev) {
  Matrix m(rows, cols);
  for (double& x : m.data()) x = stddev * rng.normal();
  return m;
}

Matrix gaussian_matrix(int rows, int cols, uint64_t seed, double stddev) {
  Rng rng(seed);
  return gaussian_matrix(rows, cols, rng, stddev);
}

}  // namespace olion
