// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations for the estimator: explicit normal
// equations and a textbook Newey-West sum, both in 50-digit arithmetic.

#pragma once

#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "refute/estimator.hpp"
#include "refute/rng.hpp"

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_50;
using HpMatrix = std::vector<std::vector<hp>>;

inline HpMatrix rows_of(const refute::estimator::DesignMatrix& d) {
  HpMatrix x(d.n_obs(), std::vector<hp>(d.n_params()));
  for (std::size_t i = 0; i < d.n_obs(); ++i)
    for (std::size_t j = 0; j < d.n_params(); ++j) x[i][j] = d.x(i, j);
  return x;
}

/// Gauss-Jordan inverse with partial pivoting.
inline HpMatrix inverse(HpMatrix a) {
  const std::size_t k = a.size();
  HpMatrix inv(k, std::vector<hp>(k, 0));
  for (std::size_t i = 0; i < k; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const hp d = a[c][c];
    for (std::size_t j = 0; j < k; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const hp f = a[r][c];
      if (f == 0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

struct Fit {
  std::vector<double> beta;
  std::vector<double> se;  // HAC
  HpMatrix cov;
};

/// beta = (X'X)^-1 X'y and the Newey-West covariance with Bartlett weights,
/// accumulated observation by observation.
inline Fit fit(const refute::estimator::DesignMatrix& d, int h) {
  const auto x = rows_of(d);
  const std::size_t n = d.n_obs(), k = d.n_params();
  HpMatrix xtx(k, std::vector<hp>(k, 0));
  std::vector<hp> xty(k, 0);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t a = 0; a < k; ++a) {
      xty[a] += x[t][a] * hp(d.y[t]);
      for (std::size_t b = 0; b < k; ++b) xtx[a][b] += x[t][a] * x[t][b];
    }
  const auto inv = inverse(xtx);
  std::vector<hp> beta(k, 0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) beta[a] += inv[a][b] * xty[b];
  std::vector<hp> e(n);
  for (std::size_t t = 0; t < n; ++t) {
    hp fitted = 0;
    for (std::size_t a = 0; a < k; ++a) fitted += x[t][a] * beta[a];
    e[t] = hp(d.y[t]) - fitted;
  }
  HpMatrix s(k, std::vector<hp>(k, 0));
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) s[a][b] += e[t] * e[t] * x[t][a] * x[t][b];
  for (int l = 1; l <= h; ++l) {
    const hp w = hp(1) - hp(l) / hp(h + 1);
    for (std::size_t t = static_cast<std::size_t>(l); t < n; ++t) {
      const std::size_t u = t - static_cast<std::size_t>(l);
      const hp ee = e[t] * e[u];
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
          s[a][b] += w * ee * (x[t][a] * x[u][b] + x[u][a] * x[t][b]);
    }
  }
  HpMatrix tmp(k, std::vector<hp>(k, 0)), cov(k, std::vector<hp>(k, 0));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c) tmp[a][b] += inv[a][c] * s[c][b];
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c) cov[a][b] += tmp[a][c] * inv[c][b];
  Fit out;
  for (std::size_t a = 0; a < k; ++a) {
    out.beta.push_back(static_cast<double>(beta[a]));
    out.se.push_back(static_cast<double>(sqrt(cov[a][a])));
  }
  out.cov = std::move(cov);
  return out;
}

/// floor(4 (T/100)^(2/9)) evaluated in 50 digits.
inline int hac_lag(std::size_t t) {
  const hp v = 4 * pow(hp(t) / 100, hp(2) / 9);
  return static_cast<int>(floor(v));
}

/// Random design with an intercept and k-1 standard-normal columns.
inline refute::estimator::DesignMatrix random_design(refute::RandomStream& rng, std::size_t n,
                                                     std::size_t k) {
  refute::estimator::DesignMatrix d;
  d.x = refute::linalg::Matrix(n, k);
  d.y.resize(n);
  d.days.resize(n);
  for (std::size_t j = 0; j < k; ++j) d.names.push_back("x" + std::to_string(j));
  std::vector<double> coef(k);
  for (auto& c : coef) c = (rng.uniform() < 0.5 ? -1 : 1) * (0.5 + rng.uniform());
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d.days[i] = i;
    d.x(i, 0) = 1.0;
    for (std::size_t j = 1; j < k; ++j) d.x(i, j) = rng.normal();
    double y = 0.0;
    for (std::size_t j = 0; j < k; ++j) y += coef[j] * d.x(i, j);
    // Heteroskedastic, autocorrelated noise so every HAC term matters.
    e = 0.4 * e + (0.5 + std::abs(d.x(i, k > 1 ? 1 : 0))) * rng.normal();
    d.y[i] = y + e;
  }
  return d;
}

}  // namespace oracle
