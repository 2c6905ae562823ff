// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include "refute/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "refute/error.hpp"
#include "refute/kernels/kernels.hpp"

namespace refute::estimator {

namespace {

bool is_constant(std::span<const double> v) {
  if (v.empty()) return true;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double scale = std::max({1e-300, std::abs(*lo), std::abs(*hi)});
  return (*hi - *lo) <= 1e-12 * scale;
}

}  // namespace

std::string ModelSpec::label() const {
  return ticker + "/" + aspect + "/" + std::to_string(lag);
}

DesignMatrix DesignMatrix::take_rows(std::span<const std::size_t> rows) const {
  DesignMatrix out;
  out.names = names;
  out.y.reserve(rows.size());
  out.days.reserve(rows.size());
  for (auto r : rows) {
    out.y.push_back(y[r]);
    out.days.push_back(days[r]);
  }
  out.x = linalg::Matrix(rows.size(), x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    auto src = x.col(j);
    auto dst = out.x.col(j);
    for (std::size_t i = 0; i < rows.size(); ++i) dst[i] = src[rows[i]];
  }
  return out;
}

DesignMatrix DesignMatrix::with_column(std::string name, std::span<const double> values) const {
  if (values.size() != n_obs()) throw validation_error("extra column length mismatch");
  DesignMatrix out = *this;
  out.x.append_col(values);
  out.names.push_back(std::move(name));
  return out;
}

DesignMatrix build_design(const ModelSpec& spec, const signal::SentimentPanel& signals,
                          const ingest::ReturnPanel& returns) {
  return build_design(spec, signals.z, signals.activity_z, returns);
}

DesignMatrix build_design(const ModelSpec& spec, std::span<const double> treatment,
                          std::span<const double> activity_z,
                          const ingest::ReturnPanel& returns) {
  const std::size_t days = returns.adj_close.size();
  if (treatment.size() != days || (spec.controls.activity && activity_z.size() != days))
    throw validation_error("sentiment and return panels are not on the same calendar");
  if (spec.lag < 0) throw config_error("negative lag in " + spec.label());
  const auto lag = static_cast<std::size_t>(spec.lag);
  const std::size_t first =
      std::max<std::size_t>({1, lag, spec.controls.lagged_return ? 2u : 1u});
  const std::size_t n = days > first ? days - first : 0;
  const std::size_t k = 2 + (spec.controls.lagged_return ? 1 : 0) + (spec.controls.activity ? 1 : 0);
  if (n < k + kMinDof)
    throw insufficient_data(spec.label() + ": " + std::to_string(n) +
                            " usable rows for " + std::to_string(k) + " parameters");

  DesignMatrix d;
  d.x = linalg::Matrix(n, k);
  d.y.resize(n);
  d.days.resize(n);
  d.names = {"intercept", "treatment"};
  if (spec.controls.lagged_return) d.names.emplace_back("lagged_return");
  if (spec.controls.activity) d.names.emplace_back("activity");
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = first + i;
    d.days[i] = t;
    d.y[i] = returns.return_on(t);
    std::size_t c = 0;
    d.x(i, c++) = 1.0;
    d.x(i, c++) = treatment[t - lag];
    if (spec.controls.lagged_return) d.x(i, c++) = returns.return_on(t - 1);
    if (spec.controls.activity) d.x(i, c++) = activity_z[t - lag];
  }
  for (std::size_t c = 1; c < k; ++c)
    if (is_constant(d.x.col(c)))
      throw degenerate_design(spec.label() + ": column '" + d.names[c] + "' is constant");
  return d;
}

OlsFit ols_fit(const DesignMatrix& design) {
  linalg::HouseholderQr qr(design.x);
  if (!qr.full_rank()) throw degenerate_design("design matrix is rank deficient");
  OlsFit fit;
  fit.coefficients = qr.solve(design.y);
  fit.residuals = design.y;
  for (std::size_t j = 0; j < design.n_params(); ++j)
    kernels::axpy(-fit.coefficients[j], design.x.col(j), fit.residuals);
  fit.xtx_inverse = qr.normal_inverse();
  return fit;
}

double treatment_coefficient(const DesignMatrix& design) {
  linalg::HouseholderQr qr(design.x);
  if (!qr.full_rank()) throw degenerate_design("design matrix is rank deficient");
  return qr.solve(design.y)[DesignMatrix::kTreatment];
}

int hac_lag_length(std::size_t t) {
  return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(t) / 100.0, 2.0 / 9.0)));
}

std::vector<double> bartlett_weights(int h) {
  std::vector<double> w;
  for (int j = 1; j <= h; ++j) w.push_back(1.0 - static_cast<double>(j) / (h + 1));
  return w;
}

linalg::Matrix hac_covariance(const DesignMatrix& design, std::span<const double> residuals,
                              int h, const linalg::Matrix& xtx_inverse) {
  const std::size_t n = design.n_obs();
  const std::size_t k = design.n_params();
  if (h < 0 || static_cast<std::size_t>(h) >= n)
    throw Error(ErrorKind::InvalidLag,
                "HAC lag " + std::to_string(h) + " needs more than " + std::to_string(n) + " rows");
  if (residuals.size() != n) throw validation_error("residual length mismatch");

  linalg::Matrix scores(n, k);
  for (std::size_t a = 0; a < k; ++a) {
    auto x = design.x.col(a);
    auto s = scores.col(a);
    for (std::size_t t = 0; t < n; ++t) s[t] = x[t] * residuals[t];
  }
  linalg::Matrix meat(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      const double g = kernels::dot(scores.col(a), scores.col(b));
      meat(a, b) = g;
      meat(b, a) = g;
    }
  const auto w = bartlett_weights(h);
  for (int j = 1; j <= h; ++j) {
    const auto lag = static_cast<std::size_t>(j);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        // Gamma_j(a, b) = sum_t s_t,a s_{t-j},b
        const double g =
            kernels::dot(scores.col(a).subspan(lag), scores.col(b).first(n - lag));
        meat(a, b) += w[lag - 1] * g;
        meat(b, a) += w[lag - 1] * g;
      }
  }
  return linalg::sandwich(xtx_inverse, meat);
}

linalg::Matrix hac_covariance(const DesignMatrix& design, std::span<const double> residuals,
                              int h) {
  linalg::HouseholderQr qr(design.x);
  if (!qr.full_rank()) throw degenerate_design("design matrix is rank deficient");
  return hac_covariance(design, residuals, h, qr.normal_inverse());
}

double two_sided_p_value(double t_stat, double dof) {
  if (std::isnan(t_stat)) return 1.0;
  if (std::isinf(t_stat)) return 0.0;
  boost::math::students_t dist(dof);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t_stat)));
  return std::clamp(p, 0.0, 1.0);
}

EstimationResult estimate(const DesignMatrix& design, const ModelSpec& spec) {
  const OlsFit fit = ols_fit(design);
  EstimationResult r;
  r.spec = spec;
  r.n_obs = design.n_obs();
  r.n_params = design.n_params();
  r.hac_lag = hac_lag_length(r.n_obs);
  const auto cov = hac_covariance(design, fit.residuals, r.hac_lag, fit.xtx_inverse);
  r.beta = fit.coefficients[DesignMatrix::kTreatment];
  r.alpha = fit.coefficients[DesignMatrix::kIntercept];
  r.hac_se = std::sqrt(std::max(0.0, cov(DesignMatrix::kTreatment, DesignMatrix::kTreatment)));
  if (r.hac_se > 0.0)
    r.t_stat = r.beta / r.hac_se;
  else
    r.t_stat = r.beta == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), r.beta);
  r.p_value = two_sided_p_value(r.t_stat, static_cast<double>(r.n_obs - r.n_params));
  for (std::size_t j = 2; j < design.n_params(); ++j) {
    r.control_names.push_back(design.names[j]);
    r.gamma.push_back(fit.coefficients[j]);
  }
  r.residuals = fit.residuals;
  return r;
}

EstimationResult estimate(const ModelSpec& spec, const signal::SentimentPanel& signals,
                          const ingest::ReturnPanel& returns) {
  return estimate(build_design(spec, signals, returns), spec);
}

}  // namespace refute::estimator
