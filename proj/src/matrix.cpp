// SPDX-License-Identifier: Apache-2.0
#include "olion/matrix.hpp"

#include <Eigen/Core>
#include <cmath>
#include <cstdlib>
#include <string>

#include "olion/errors.hpp"

namespace olion {

namespace {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenRowMajor> view(const Matrix& m) {
  return {m.data().data(), m.rows(), m.cols()};
}

Eigen::Map<EigenRowMajor> view(Matrix& m) {
  return {m.data().data(), m.rows(), m.cols()};
}

}  // namespace

Matrix::Matrix(int rows, int cols)
    : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols, 0.0) {
  if (rows <= 0 || cols <= 0) {
    throw Error(ErrorCode::InvalidDim, "Matrix dimensions must be positive");
  }
}

Matrix::Matrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows <= 0 || cols <= 0) {
    throw Error(ErrorCode::InvalidDim, "Matrix dimensions must be positive");
  }
  if (entries_.size() != static_cast<size_t>(rows) * cols) {
    throw Error(ErrorCode::ShapeMismatch,
                "entry count does not match rows*cols");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  if (rows_ == 0 || cols_ == 0) {
    throw Error(ErrorCode::InvalidDim, "Matrix dimensions must be positive");
  }
  entries_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) {
      throw Error(ErrorCode::ShapeMismatch, "ragged initializer rows");
    }
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::constant(int rows, int cols, double value) {
  Matrix m(rows, cols);
  for (double& x : m.entries_) x = value;
  return m;
}

bool Matrix::is_finite() const {
  for (double x : entries_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "operator+=");
  for (size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "operator-=");
  for (size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
  return *this;
}

Matrix& Matrix::operator*=(double scalar) {
  for (double& x : entries_) x *= scalar;
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(double scalar, Matrix m) { return m *= scalar; }
Matrix operator*(Matrix m, double scalar) { return m *= scalar; }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::ShapeMismatch,
                "matmul: inner dimensions disagree (" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + ")");
  }
  Matrix out(a.rows(), b.cols());
  view(out).noalias() = view(a) * view(b);
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  view(out) = view(m).transpose();
  return out;
}

double frobenius_inner(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "frobenius_inner");
  double acc = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (size_t i = 0; i < da.size(); ++i) acc += da[i] * db[i];
  return acc;
}

double frobenius_norm(const Matrix& m) {
  double acc = 0.0;
  for (double x : m.data()) acc += x * x;
  return std::sqrt(acc);
}

double entrywise_l1_norm(const Matrix& m) {
  double acc = 0.0;
  for (double x : m.data()) acc += std::abs(x);
  return acc;
}

double max_abs_entry(const Matrix& m) {
  double best = 0.0;
  for (double x : m.data()) best = std::max(best, std::abs(x));
  return best;
}

Matrix sign_map(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  auto src = m.data();
  auto dst = out.data();
  for (size_t i = 0; i < src.size(); ++i) {
    dst[i] = (src[i] > 0.0) ? 1.0 : (src[i] < 0.0 ? -1.0 : 0.0);
  }
  return out;
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* where) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(where) + ": shapes " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                    "x" + std::to_string(b.cols()));
  }
}

}  // namespace olion
