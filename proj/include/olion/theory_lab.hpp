// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "olion/matrix.hpp"

namespace olion {

/// Independent Haar-distributed orthonormal factors U (d1 x r), V (d2 x r).
struct HaarPair {
  Matrix U;
  Matrix V;
  uint64_t seed = 0;
};

/// Gaussian fill then QR, with column signs fixed so R has a non-negative
/// diagonal (required for the Q-factor to be Haar rather than merely
/// orthonormal). Throws InvalidRank when r > min(d1, d2) or r < 1.
HaarPair sample_haar_pair(int d1, int d2, int r, uint64_t seed);

struct EpsilonMcResult {
  double mean_eps = 0.0;
  double std_eps = 0.0;
  std::vector<double> eps_samples;
  std::vector<double> q_l1_samples;
};

/// Monte-Carlo isotropy constants for Q = U V^T over `trials` independent
/// Haar pairs (trial i uses seed base_seed + i). Requires r >= 2.
EpsilonMcResult epsilon_mc(int d1, int d2, int r, int trials, uint64_t base_seed);

struct GridCell {
  int d1 = 0;
  int d2 = 0;
  int r = 0;
};

struct ScalingStudy {
  std::vector<GridCell> grid;
  int trials = 0;
  uint64_t seed = 0;
  std::vector<EpsilonMcResult> per_cell;  // filled by run_scaling_study
};

/// Runs epsilon_mc over every cell. Requires >= 30 trials per cell.
void run_scaling_study(ScalingStudy& study);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of log(mean eps) against
/// log(sqrt(r log r / (d1 d2))); slope near one confirms the scaling law.
/// Requires >= 4 cells spanning >= 8x in d1*d2 (InsufficientGrid otherwise).
FitResult fit_scaling_law(const ScalingStudy& study);

/// Writes {d1,d2,r,trial,eps,q_l1} sample rows.
void write_study_csv(const ScalingStudy& study, const std::filesystem::path& path);

/// Writes {slope, intercept, r_squared, grid} as JSON.
void write_fit_json(const ScalingStudy& study, const FitResult& fit,
                    const std::filesystem::path& path);

}  // namespace olion
