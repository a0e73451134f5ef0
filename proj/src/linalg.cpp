// SPDX-License-Identifier: Apache-2.0
#include "olion/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "olion/errors.hpp"

namespace olion {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

Matrix from_eigen(const Eigen::MatrixXd& em) {
  Matrix out(static_cast<int>(em.rows()), static_cast<int>(em.cols()));
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out(i, j) = em(i, j);
  return out;
}

void require_nonzero(const Matrix& m, const char* where) {
  if (max_abs_entry(m) < kZeroFloor) {
    throw Error(ErrorCode::ZeroMatrix, std::string(where) + ": matrix is zero");
  }
}

}  // namespace

Matrix ThinSvd::reconstruct() const {
  // U * diag(sigma) * V^T without forming the diagonal.
  Matrix scaled = U;
  for (int i = 0; i < scaled.rows(); ++i)
    for (int k = 0; k < scaled.cols(); ++k) scaled(i, k) *= singular_values[k];
  return matmul(scaled, transpose(V));
}

Matrix ThinSvd::polar() const { return matmul(U, transpose(V)); }

ThinSvd thin_svd(const Matrix& m, double rank_tol) {
  require_nonzero(m, "thin_svd");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(to_eigen(m),
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  double cut = rank_tol * sigma(0);
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > cut && sigma(k) > 0.0) ++rank;
  }
  if (rank == 0) {
    throw Error(ErrorCode::ZeroMatrix, "thin_svd: no singular value above floor");
  }

  ThinSvd out;
  out.U = from_eigen(svd.matrixU().leftCols(rank));
  out.V = from_eigen(svd.matrixV().leftCols(rank));
  out.singular_values.assign(sigma.data(), sigma.data() + rank);
  return out;
}

Matrix polar_factor_exact(const Matrix& m) {
  require_nonzero(m, "polar_factor_exact");
  if (m.rows() < m.cols()) {
    return transpose(polar_factor_exact(transpose(m)));
  }
  return thin_svd(m).polar();
}

Matrix newton_schulz(const Matrix& m, int steps) {
  require_nonzero(m, "newton_schulz");
  if (steps < 0) {
    throw Error(ErrorCode::OutOfRange, "newton_schulz: negative step count");
  }

  double scale = 1.0 / (frobenius_norm(m) + kNsNormEps);
  if (steps == 0) {
    Matrix out = m;
    out *= scale;
    return out;
  }

  // Iterate in the wide orientation so the Gram matrix X X^T is the small one.
  bool transposed = m.rows() > m.cols();
  Eigen::MatrixXd x = to_eigen(m) * scale;
  if (transposed) x = x.transpose().eval();

  for (int k = 0; k < steps; ++k) {
    Eigen::MatrixXd gram = x * x.transpose();
    Eigen::MatrixXd poly =
        kNsCoeffB * gram + kNsCoeffC * (gram * gram);
    x = kNsCoeffA * x + poly * x;
  }

  if (transposed) x = x.transpose().eval();
  return from_eigen(x);
}

std::vector<double> singular_values(const Matrix& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(to_eigen(m));
  const auto& sigma = svd.singularValues();
  return {sigma.data(), sigma.data() + sigma.size()};
}

NormSuite norm_suite(const Matrix& m) {
  NormSuite out;
  out.frobenius = frobenius_norm(m);
  out.l1 = entrywise_l1_norm(m);
  out.linf = max_abs_entry(m);
  if (out.linf < kZeroFloor) {
    return out;  // all-zero input: spectral and nuclear are zero
  }
  ThinSvd svd = thin_svd(m);
  out.spectral = svd.sigma_max();
  for (double s : svd.singular_values) out.nuclear += s;
  return out;
}

}  // namespace olion
