// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include "refute/kernels/kernels.hpp"

namespace refute::kernels::scalar {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sum_sq_dev(const double* x, std::size_t n, double center) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - center;
    acc += d * d;
  }
  return acc;
}

const KernelTable kTable{Backend::Scalar, dot, axpy, sum, sum_sq_dev};

}  // namespace

const KernelTable& table() noexcept { return kTable; }

}  // namespace refute::kernels::scalar
