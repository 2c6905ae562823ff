// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Vector kernels behind the estimator's inner loops. Every kernel has a
// scalar reference implementation; an AVX2/FMA variant is compiled on x86-64
// and chosen at runtime when the CPU supports it. Set REFUTE_SIMD=scalar in
// the environment to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace refute::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend b) noexcept;

struct KernelTable {
  Backend backend;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*sum_sq_dev)(const double* x, std::size_t n, double center);
};

namespace scalar {
const KernelTable& table() noexcept;
}
namespace avx2 {
/// nullptr when the AVX2 translation unit is not compiled in.
const KernelTable* table() noexcept;
}

bool avx2_supported() noexcept;
Backend active_backend() noexcept;
/// Throws refute::Error(Config) when the backend is unavailable.
void set_backend(Backend b);
const KernelTable& active() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}
inline double sum(std::span<const double> x) {
  return active().sum(x.data(), x.size());
}
/// Sum of (x_i - center)^2.
inline double sum_sq_dev(std::span<const double> x, double center) {
  return active().sum_sq_dev(x.data(), x.size(), center);
}

}  // namespace refute::kernels
