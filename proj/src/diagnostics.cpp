// SPDX-License-Identifier: Apache-2.0
#include "olion/diagnostics.hpp"

#include <cmath>

#include "olion/errors.hpp"

namespace olion {

namespace {

double vector_norm2(const std::vector<double>& v, double center) {
  double acc = 0.0;
  for (double x : v) {
    double d = x - center;
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

IsotropyReport isotropy_from_factors(const Matrix& u, const Matrix& v) {
  if (u.cols() != v.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "isotropy: factor ranks disagree");
  }
  int rank = u.cols();

  Matrix q = matmul(u, transpose(v));
  Matrix s = sign_map(q);

  IsotropyReport report;
  report.rank = rank;
  report.q_l1 = entrywise_l1_norm(q);
  report.m_bar = report.q_l1 / static_cast<double>(rank);

  // m_k = u_k^T S v_k, the diagonal of U^T S V.
  Matrix ut_s = matmul(transpose(u), s);
  report.m_vector.resize(rank);
  for (int k = 0; k < rank; ++k) {
    double acc = 0.0;
    for (int j = 0; j < v.rows(); ++j) acc += ut_s(k, j) * v(j, k);
    report.m_vector[k] = acc;
  }

  double deviation = vector_norm2(report.m_vector, report.m_bar);
  report.epsilon = deviation * std::sqrt(static_cast<double>(rank)) / report.q_l1;
  return report;
}

IsotropyReport isotropy_epsilon(const Matrix& z, double rank_tol) {
  ThinSvd svd = thin_svd(z, rank_tol);
  IsotropyReport report = isotropy_from_factors(svd.U, svd.V);
  report.sigma_min_retained = svd.sigma_min();
  return report;
}

CancellationAudit cancellation_audit(const Matrix& z, double rank_tol) {
  ThinSvd svd = thin_svd(z, rank_tol);
  IsotropyReport iso = isotropy_from_factors(svd.U, svd.V);
  int rank = svd.rank();

  double alpha = 0.0;
  for (double s : svd.singular_values) alpha += s;
  alpha /= static_cast<double>(rank);

  Matrix q = svd.polar();
  Matrix s = sign_map(q);
  Matrix residual_matrix = z - alpha * q;

  // Matrix-space route.
  double lhs_signed = frobenius_inner(residual_matrix, s);

  // Diagonal route: <sigma - alpha*1, m - m_bar*1>.
  double diag_route = 0.0;
  for (int k = 0; k < rank; ++k) {
    diag_route += (svd.singular_values[k] - alpha) * (iso.m_vector[k] - iso.m_bar);
  }

  double sigma_spread = vector_norm2(svd.singular_values, alpha);

  CancellationAudit audit;
  audit.lhs = std::abs(lhs_signed);
  audit.rhs = iso.epsilon * iso.q_l1 / std::sqrt(static_cast<double>(rank)) * sigma_spread;
  audit.cs_rhs = frobenius_norm(residual_matrix) * frobenius_norm(s);
  audit.identity_residual = std::abs(lhs_signed - diag_route);
  audit.epsilon = iso.epsilon;
  audit.rank = rank;
  return audit;
}

StationarityPhi stationarity_phi(const Matrix& z, double rank_tol) {
  ThinSvd svd = thin_svd(z, rank_tol);
  IsotropyReport iso = isotropy_from_factors(svd.U, svd.V);
  int rank = svd.rank();

  StationarityPhi out;
  out.rank = rank;
  out.epsilon = iso.epsilon;
  out.q_l1 = iso.q_l1;
  for (double s : svd.singular_values) out.alpha += s;
  out.alpha /= static_cast<double>(rank);
  double spread = vector_norm2(svd.singular_values, out.alpha);
  out.rho = spread / (out.alpha * std::sqrt(static_cast<double>(rank)));
  out.phi = iso.q_l1 * out.alpha * (1.0 - iso.epsilon * out.rho);
  return out;
}

double descent_audit(double f_before, double f_after, double eta, double phi,
                     double smoothness, int d1, int d2) {
  double bound = f_before - eta * phi +
                 0.5 * smoothness * eta * eta * static_cast<double>(d1) *
                     static_cast<double>(d2);
  return f_after - bound;
}

TrajectoryRecorder::TrajectoryRecorder(const std::filesystem::path& csv_path,
                                       int64_t interval)
    : csv_(csv_path, {"step", "block", "eps", "alpha", "rho", "phi", "fro_X",
                      "spec_X", "nuc_X", "l1_X", "linf_X", "rms_D",
                      "descent_residual", "lr"}),
      interval_(interval) {
  if (interval < 1) {
    throw Error(ErrorCode::ConfigInvalid, "diag_interval must be >= 1");
  }
}

StepDiagnostics TrajectoryRecorder::record(int64_t step, const std::string& block_name,
                                           const Matrix& x, const Matrix& update_signal,
                                           const Matrix& direction, double lr,
                                           double descent_residual) {
  StepDiagnostics diag;
  diag.lr = lr;
  diag.descent_residual = descent_residual;
  diag.x_norms = norm_suite(x);
  if (!direction.empty()) {
    diag.rms_direction =
        frobenius_norm(direction) / std::sqrt(static_cast<double>(direction.size()));
  }
  if (!update_signal.empty() && max_abs_entry(update_signal) >= kZeroFloor) {
    StationarityPhi phi = stationarity_phi(update_signal);
    diag.epsilon = phi.epsilon;
    diag.alpha = phi.alpha;
    diag.rho = phi.rho;
    diag.phi = phi.phi;
    CancellationAudit audit = cancellation_audit(update_signal);
    diag.bound_lhs = audit.lhs;
    diag.bound_rhs = audit.rhs;
    diag.cauchy_schwarz_rhs = audit.cs_rhs;
  }

  csv_.write_row({std::to_string(step), block_name, format_g17(diag.epsilon),
                  format_g17(diag.alpha), format_g17(diag.rho), format_g17(diag.phi),
                  format_g17(diag.x_norms.frobenius), format_g17(diag.x_norms.spectral),
                  format_g17(diag.x_norms.nuclear), format_g17(diag.x_norms.l1),
                  format_g17(diag.x_norms.linf), format_g17(diag.rms_direction),
                  format_g17(diag.descent_residual), format_g17(diag.lr)});
  ++rows_;
  return diag;
}

}  // namespace olion
