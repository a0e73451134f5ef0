// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "olion/io.hpp"
#include "olion/linalg.hpp"
#include "olion/matrix.hpp"

namespace olion {

/// Diagonal-isotropy measurement of a matrix Z = U Sigma V^T: the
/// correlations m_k = u_k^T sign(UV^T) v_k, their mean, and the smallest
/// constant eps with ||m - m_bar 1||_2 <= eps * ||UV^T||_1 / sqrt(r).
struct IsotropyReport {
  int rank = 0;
  std::vector<double> m_vector;
  double m_bar = 0.0;      // ||Q||_1 / r
  double epsilon = 0.0;    // tight constant
  double q_l1 = 0.0;       // ||U V^T||_1
  double sigma_min_retained = 0.0;  // smallest kept singular value (0 when
                                    // factors were supplied directly)
};

IsotropyReport isotropy_epsilon(const Matrix& z, double rank_tol = kDefaultRankTol);

/// Same measurement when orthonormal factors are already available
/// (Q = U V^T with known exact rank), skipping the SVD.
IsotropyReport isotropy_from_factors(const Matrix& u, const Matrix& v);

/// Cancellation-aware bound audit for |<Z - alpha*Q, sign(Q)>|:
/// the direct value, the isotropy bound, the Cauchy-Schwarz bound, and the
/// residual of the exact diagonal-decomposition identity
/// <Z - alpha*Q, S> = <sigma - alpha*1, m - m_bar*1>.
struct CancellationAudit {
  double lhs = 0.0;
  double rhs = 0.0;
  double cs_rhs = 0.0;
  double identity_residual = 0.0;
  double epsilon = 0.0;
  int rank = 0;
};

CancellationAudit cancellation_audit(const Matrix& z, double rank_tol = kDefaultRankTol);

/// alpha = tr(Sigma)/r, rho = ||Sigma - alpha I||_F / (alpha sqrt(r)),
/// phi = ||Q||_1 * alpha * (1 - eps * rho).
struct StationarityPhi {
  double alpha = 0.0;
  double rho = 0.0;
  double phi = 0.0;
  double epsilon = 0.0;
  double q_l1 = 0.0;
  int rank = 0;
};

StationarityPhi stationarity_phi(const Matrix& z, double rank_tol = kDefaultRankTol);

/// Residual of the per-step descent inequality
///   f_after <= f_before - eta*phi + (L/2)*eta^2*d1*d2.
/// Non-positive residual certifies the step; the auditor never throws.
double descent_audit(double f_before, double f_after, double eta, double phi,
                     double smoothness, int d1, int d2);

/// Everything recorded about one (step, block) pair. The bound fields
/// satisfy bound_lhs <= bound_rhs + 1e-8 whenever the signal is nonzero
/// (the bound holds with the tight constant by construction).
struct StepDiagnostics {
  double epsilon = 0.0;
  double alpha = 0.0;
  double rho = 0.0;
  double phi = 0.0;
  double bound_lhs = 0.0;
  double bound_rhs = 0.0;
  double cauchy_schwarz_rhs = 0.0;
  NormSuite x_norms;
  double rms_direction = 0.0;
  double descent_residual = 0.0;  // NaN when no smoothness constant applies
  double lr = 0.0;
};

/// Appends one CSV row per tracked block at the configured interval.
/// Columns: step,block,eps,alpha,rho,phi,fro_X,spec_X,nuc_X,l1_X,linf_X,
/// rms_D,descent_residual,lr. Floats carry 17 significant digits.
class TrajectoryRecorder {
 public:
  TrajectoryRecorder(const std::filesystem::path& csv_path, int64_t interval);

  bool due(int64_t step) const { return step % interval_ == 0; }

  /// Computes the theory quantities from the update signal (exact thin SVD
  /// regardless of the training polar mode), writes the row, and returns
  /// the full record.
  StepDiagnostics record(int64_t step, const std::string& block_name, const Matrix& x,
                         const Matrix& update_signal, const Matrix& direction,
                         double lr, double descent_residual);

  int64_t rows_written() const { return rows_; }
  void flush() { csv_.flush(); }

 private:
  CsvWriter csv_;
  int64_t interval_;
  int64_t rows_ = 0;
};

}  // namespace olion
