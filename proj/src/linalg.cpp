// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include "refute/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "refute/kernels/kernels.hpp"

namespace refute::linalg {

void Matrix::append_col(std::span<const double> values) {
  assert(cols_ == 0 || values.size() == rows_);
  if (cols_ == 0) rows_ = values.size();
  data_.insert(data_.end(), values.begin(), values.end());
  ++cols_;
}

HouseholderQr::HouseholderQr(Matrix a) : qr_(std::move(a)) {
  const std::size_t n = qr_.rows();
  const std::size_t k = qr_.cols();
  tau_.assign(k, 0.0);
  diag_.assign(k, 0.0);
  if (n < k) {
    full_rank_ = false;
    return;
  }
  std::vector<double> col_norm(k);
  for (std::size_t j = 0; j < k; ++j) {
    auto c = qr_.col(j);
    col_norm[j] = std::sqrt(kernels::dot(c, c));
  }
  for (std::size_t j = 0; j < k; ++j) {
    auto x = qr_.col(j).subspan(j);
    const double norm = std::sqrt(kernels::dot(x, x));
    // A column whose component orthogonal to the previous ones vanishes
    // relative to its own length is linearly dependent on them.
    if (!(norm > 1e-10 * col_norm[j]) || col_norm[j] == 0.0) {
      full_rank_ = false;
      return;
    }
    const double alpha = x[0];
    const double beta = alpha >= 0.0 ? -norm : norm;
    tau_[j] = (beta - alpha) / beta;
    const double scale = 1.0 / (alpha - beta);
    for (std::size_t i = 1; i < x.size(); ++i) x[i] *= scale;
    x[0] = 1.0;
    for (std::size_t c = j + 1; c < k; ++c) {
      auto y = qr_.col(c).subspan(j);
      const double w = kernels::dot(x, y);
      kernels::axpy(-tau_[j] * w, x, y);
    }
    diag_[j] = beta;
    x[0] = beta;
  }
}

std::vector<double> HouseholderQr::solve(std::span<const double> b) const {
  const std::size_t n = qr_.rows();
  const std::size_t k = qr_.cols();
  std::vector<double> qtb(b.begin(), b.end());
  std::vector<double> v(n);
  for (std::size_t j = 0; j < k; ++j) {
    auto col = qr_.col(j);
    std::span<double> vj(v.data() + j, n - j);
    vj[0] = 1.0;
    for (std::size_t i = j + 1; i < n; ++i) vj[i - j] = col[i];
    std::span<double> rest(qtb.data() + j, n - j);
    const double w = kernels::dot(vj, rest);
    kernels::axpy(-tau_[j] * w, vj, rest);
  }
  std::vector<double> x(k);
  for (std::size_t jj = k; jj-- > 0;) {
    double acc = qtb[jj];
    for (std::size_t c = jj + 1; c < k; ++c) acc -= qr_(jj, c) * x[c];
    x[jj] = acc / diag_[jj];
  }
  return x;
}

Matrix HouseholderQr::normal_inverse() const {
  const std::size_t k = qr_.cols();
  // Rinv upper triangular.
  Matrix rinv(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    rinv(j, j) = 1.0 / diag_[j];
    for (std::size_t i = j; i-- > 0;) {
      double acc = 0.0;
      for (std::size_t m = i + 1; m <= j; ++m) acc += qr_(i, m) * rinv(m, j);
      rinv(i, j) = -acc / diag_[i];
    }
  }
  Matrix out(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      double acc = 0.0;
      for (std::size_t m = j; m < k; ++m) acc += rinv(i, m) * rinv(j, m);
      out(i, j) = acc;
      out(j, i) = acc;
    }
  return out;
}

Matrix sandwich(const Matrix& bread, const Matrix& meat) {
  const std::size_t k = bread.rows();
  Matrix tmp(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double acc = 0.0;
      for (std::size_t m = 0; m < k; ++m) acc += bread(i, m) * meat(m, j);
      tmp(i, j) = acc;
    }
  Matrix out(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      double acc = 0.0;
      for (std::size_t m = 0; m < k; ++m) acc += tmp(i, m) * bread(m, j);
      out(i, j) = acc;
      out(j, i) = acc;
    }
  return out;
}

}  // namespace refute::linalg
