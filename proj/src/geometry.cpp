// SPDX-License-Identifier: Apache-2.0
#include "olion/geometry.hpp"

#include <cmath>

#include "olion/errors.hpp"

namespace olion {

Matrix project_A(const Matrix& z, PolarMode mode, int ns_steps) {
  if (mode == PolarMode::Exact) {
    return polar_factor_exact(z);
  }
  return newton_schulz(z, ns_steps);
}

Matrix project_B(const Matrix& z, int d1) {
  if (d1 <= 0) {
    throw Error(ErrorCode::InvalidDim, "project_B: d1 must be positive");
  }
  Matrix out = sign_map(z);
  out *= 1.0 / std::sqrt(static_cast<double>(d1));
  return out;
}

Matrix olion_direction(const Matrix& z, PolarMode mode, int ns_steps) {
  return sign_map(project_A(z, mode, ns_steps));
}

DirectionReport hadamard_proximity(const Matrix& d) {
  if (max_abs_entry(d) < kZeroFloor) {
    throw Error(ErrorCode::ZeroMatrix, "hadamard_proximity: zero direction");
  }

  DirectionReport report;
  report.direction = d;

  // Column-normalize, then measure the Gram defect against identity.
  Matrix normalized = d;
  for (int j = 0; j < d.cols(); ++j) {
    double norm_sq = 0.0;
    for (int i = 0; i < d.rows(); ++i) norm_sq += d(i, j) * d(i, j);
    double norm = std::sqrt(norm_sq);
    if (norm < kZeroFloor) continue;  // zero column left as-is
    for (int i = 0; i < d.rows(); ++i) normalized(i, j) /= norm;
  }
  Matrix gram = matmul(transpose(normalized), normalized);
  double defect_sq = 0.0;
  for (int i = 0; i < gram.rows(); ++i) {
    for (int j = 0; j < gram.cols(); ++j) {
      double target = (i == j) ? 1.0 : 0.0;
      double diff = gram(i, j) - target;
      defect_sq += diff * diff;
    }
  }
  report.dist_to_A = std::sqrt(defect_sq);

  // Spread of |entries| over the nonzero support.
  double sum = 0.0;
  long count = 0;
  for (double x : d.data()) {
    if (x != 0.0) {
      sum += std::abs(x);
      ++count;
    }
  }
  if (count > 0) {
    double mean = sum / static_cast<double>(count);
    double var = 0.0;
    for (double x : d.data()) {
      if (x != 0.0) {
        double diff = std::abs(x) - mean;
        var += diff * diff;
      }
    }
    var /= static_cast<double>(count);
    report.entry_uniformity = std::sqrt(var) / mean;
  }
  return report;
}

}  // namespace olion
