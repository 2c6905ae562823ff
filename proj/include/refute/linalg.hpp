// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace refute::linalg {

/// Dense column-major matrix. Columns are contiguous so the design-matrix
/// kernels (dot products, axpy updates) stream over unit-stride memory.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

  std::span<const double> data() const { return data_; }

  void append_col(std::span<const double> values);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Householder QR of an n x k matrix (n >= k). Rank deficiency is reported
/// rather than thrown so callers can choose the error they raise.
class HouseholderQr {
 public:
  explicit HouseholderQr(Matrix a);

  bool full_rank() const { return full_rank_; }
  std::size_t rows() const { return qr_.rows(); }
  std::size_t cols() const { return qr_.cols(); }

  /// Least-squares solution of A x = b.
  std::vector<double> solve(std::span<const double> b) const;
  /// (A'A)^-1 = R^-1 R^-T.
  Matrix normal_inverse() const;

 private:
  Matrix qr_;                 // R on and above the diagonal, reflectors below
  std::vector<double> tau_;   // reflector scales
  std::vector<double> diag_;  // R diagonal
  bool full_rank_ = true;
};

/// C = A * B * A (all k x k, A symmetric).
Matrix sandwich(const Matrix& bread, const Matrix& meat);

}  // namespace refute::linalg
