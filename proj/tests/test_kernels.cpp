// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "refute/error.hpp"
#include "refute/kernels/kernels.hpp"
#include "support.hpp"

using namespace refute;
namespace k = refute::kernels;

namespace {

struct BackendGuard {
  k::Backend saved = k::active_backend();
  ~BackendGuard() { k::set_backend(saved); }
};

const k::KernelTable* simd() { return k::avx2_supported() ? k::avx2::table() : nullptr; }

}  // namespace

TEST_CASE("scalar kernels on hand-checked inputs") {
  const auto& s = k::scalar::table();
  const double a[] = {1, 2, 3, 4, 5};
  const double b[] = {5, 4, 3, 2, 1};
  CHECK(s.dot(a, b, 5) == 35.0);
  CHECK(s.sum(a, 5) == 15.0);
  CHECK(s.sum_sq_dev(a, 5, 3.0) == 10.0);
  double y[] = {1, 1, 1, 1, 1};
  s.axpy(2.0, a, y, 5);
  CHECK(y[4] == 11.0);
  CHECK(s.dot(a, b, 0) == 0.0);
}

TEST_CASE("avx2 kernels match the scalar reference for every length and offset") {
  const auto* v = simd();
  if (!v) {
    MESSAGE("AVX2 unavailable; equivalence not exercised");
    return;
  }
  const auto& s = k::scalar::table();
  RandomStream rng(7, 1);
  auto a = testing::normals(rng, 300);
  auto b = testing::normals(rng, 300);
  for (std::size_t off = 0; off < 4; ++off) {
    for (std::size_t n = 0; n + off <= 260; n += (n < 40 ? 1 : 17)) {
      const double* pa = a.data() + off;
      const double* pb = b.data() + off;
      double bound = 0.0;
      for (std::size_t i = 0; i < n; ++i) bound += std::abs(pa[i] * pb[i]);
      CHECK(std::abs(v->dot(pa, pb, n) - s.dot(pa, pb, n)) <= 1e-14 * (bound + 1));
      double abs_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(pa[i]);
      CHECK(std::abs(v->sum(pa, n) - s.sum(pa, n)) <= 1e-14 * (abs_sum + 1));
      const double ss = s.sum_sq_dev(pa, n, 0.3);
      CHECK(std::abs(v->sum_sq_dev(pa, n, 0.3) - ss) <= 1e-14 * (ss + 1));
      std::vector<double> y1(b.begin() + off, b.begin() + off + n), y2 = y1;
      s.axpy(-0.7, pa, y1.data(), n);
      v->axpy(-0.7, pa, y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * (std::abs(y1[i]) + 1));
    }
  }
}

TEST_CASE("backend switch changes only rounding of a full estimate") {
  BackendGuard guard;
  RandomStream rng(11, 2);
  const std::size_t T = 150;
  auto z = testing::normals(rng, T);
  auto act = testing::normals(rng, T);
  auto e = testing::normals(rng, T, 0.01);
  std::vector<double> r(T);
  for (std::size_t t = 1; t < T; ++t) r[t] = 0.004 * z[t - 1] + e[t];
  const auto sig = testing::signal_panel(z, act);
  const auto ret = testing::panel_from_returns(r);
  const estimator::ModelSpec spec{"T", "a", 1, {}};

  k::set_backend(k::Backend::Scalar);
  CHECK(k::active_backend() == k::Backend::Scalar);
  const auto ref = estimator::estimate(spec, sig, ret);
  if (!simd()) return;
  k::set_backend(k::Backend::Avx2);
  const auto fast = estimator::estimate(spec, sig, ret);
  CHECK(testing::rel_err(ref.beta, fast.beta) < 1e-12);
  CHECK(testing::rel_err(ref.hac_se, fast.hac_se) < 1e-12);
  CHECK(testing::rel_err(ref.p_value, fast.p_value) < 1e-10);
}

TEST_CASE("unavailable backend is a config error") {
  BackendGuard guard;
  if (k::avx2_supported()) {
    CHECK_NOTHROW(k::set_backend(k::Backend::Avx2));
  } else {
    CHECK_THROWS_AS(k::set_backend(k::Backend::Avx2), refute::Error);
  }
  CHECK_NOTHROW(k::set_backend(k::Backend::Scalar));
}
