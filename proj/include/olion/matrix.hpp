// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace olion {

/// Dense real matrix, row-major, double precision. The single carrier type
/// for parameters, gradients and update directions.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-filled
  Matrix(int rows, int cols, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);
  static Matrix constant(int rows, int cols, double value);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long size() const { return static_cast<long>(rows_) * cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(int i, int j) { return entries_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return entries_[static_cast<size_t>(i) * cols_ + j]; }

  std::span<double> data() { return entries_; }
  std::span<const double> data() const { return entries_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool is_finite() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double scalar);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> entries_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(double scalar, Matrix m);
Matrix operator*(Matrix m, double scalar);

/// Row-major matrix product (Eigen-backed, single-threaded deterministic).
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

/// tr(a^T b): the Frobenius inner product.
double frobenius_inner(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& m);
double entrywise_l1_norm(const Matrix& m);
double max_abs_entry(const Matrix& m);

/// Entrywise sign with sign(0) = 0.
Matrix sign_map(const Matrix& m);

/// Throws ShapeMismatch unless shapes agree.
void require_same_shape(const Matrix& a, const Matrix& b, const char* where);

}  // namespace olion
