// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "olion/linalg.hpp"
#include "olion/matrix.hpp"

namespace olion {

/// How the orthogonalization step is carried out.
enum class PolarMode { Exact, NewtonSchulz };

/// The two structured update sets for tall matrices: column-orthonormal
/// matrices (spectral extreme) and uniform-magnitude sign patterns
/// (entrywise-max extreme). Their intersection is the scaled Hadamard set.
enum class ConstraintSetTag { SpectralSetA, LinfSetB };

/// Proximity of a direction to the scaled-Hadamard ideal.
struct DirectionReport {
  Matrix direction;
  double dist_to_A = 0.0;          // ||Q^T Q - I||_F of the column-normalized direction
  double entry_uniformity = 0.0;   // stddev(|entries|) / mean(|entries|), nonzero entries
};

/// Maximizer of <X, Z> over column-orthonormal X: the polar factor of Z,
/// either exact or its Newton-Schulz approximation.
Matrix project_A(const Matrix& z, PolarMode mode, int ns_steps = 5);

/// Maximizer of <X, Z> over entries +-1/sqrt(d1): sign(Z)/sqrt(d1).
Matrix project_B(const Matrix& z, int d1);

/// Composed direction sign(project_A(Z)). The 1/sqrt(d1) scale of the
/// B-projection is intentionally left to the optimizer's RMS alignment.
Matrix olion_direction(const Matrix& z, PolarMode mode, int ns_steps = 5);

DirectionReport hadamard_proximity(const Matrix& d);

}  // namespace olion
