// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "olion/matrix.hpp"

namespace olion {

/// Relative rank cut: singular values <= rank_tol * sigma_max are dropped.
inline constexpr double kDefaultRankTol = 1e-10;

/// Absolute floor below which a matrix counts as zero (ZeroMatrix error /
/// ZeroGradient step), applied to the largest |entry|.
inline constexpr double kZeroFloor = 1e-30;

/// Quintic Newton-Schulz iterate coefficients and the normalization offset.
/// The scalar map g(s) = a*s + b*s^3 + c*s^5 has a superattracting fixed
/// point at 1 (g(1) = 1, g'(1) = 0) and never overshoots past its upper
/// fixed point on [0, 1], so K = 5 already lands the full-rank Gaussian
/// spectrum within ~1% of the exact polar factor.
inline constexpr double kNsCoeffA = 2.5;
inline constexpr double kNsCoeffB = -2.5;
inline constexpr double kNsCoeffC = 1.0;
inline constexpr double kNsNormEps = 1e-7;

/// Rank-truncated SVD: M ~= U * diag(singular_values) * V^T with
/// orthonormal U (d1 x r) and V (d2 x r), singular values sorted
/// non-increasing and strictly positive.
struct ThinSvd {
  Matrix U;
  std::vector<double> singular_values;
  Matrix V;

  int rank() const { return static_cast<int>(singular_values.size()); }
  double sigma_max() const { return singular_values.empty() ? 0.0 : singular_values.front(); }
  double sigma_min() const { return singular_values.empty() ? 0.0 : singular_values.back(); }
  Matrix reconstruct() const;
  /// U * V^T, the orthogonal polar part on the retained subspace.
  Matrix polar() const;
};

/// Throws ZeroMatrix when every entry is below the absolute floor.
ThinSvd thin_svd(const Matrix& m, double rank_tol = kDefaultRankTol);

/// Exact polar factor U V^T. Wide inputs are transposed, factored and
/// transposed back, so tall outputs have orthonormal columns and wide
/// ones orthonormal rows.
Matrix polar_factor_exact(const Matrix& m);

/// K-step quintic Newton-Schulz approximation of the polar factor.
/// K = 0 returns the Frobenius-normalized input. Iteration runs in the
/// wide orientation; the result is returned in the input orientation.
Matrix newton_schulz(const Matrix& m, int steps);

struct NormSuite {
  double frobenius = 0.0;
  double spectral = 0.0;   // sigma_max
  double nuclear = 0.0;    // sum of singular values
  double l1 = 0.0;         // entrywise sum of |entries|
  double linf = 0.0;       // max |entry|
};

/// All five norms in one pass (spectral/nuclear via thin SVD). A zero
/// matrix yields all zeros rather than an error.
NormSuite norm_suite(const Matrix& m);

/// All singular values of m, sorted non-increasing (no rank truncation).
std::vector<double> singular_values(const Matrix& m);

}  // namespace olion
