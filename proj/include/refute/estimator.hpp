// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "refute/ingest.hpp"
#include "refute/linalg.hpp"
#include "refute/signal.hpp"

namespace refute::estimator {

struct ControlSet {
  bool lagged_return = true;  // r_{t-1}
  bool activity = true;       // standardized activity at the treatment lag

  bool operator==(const ControlSet&) const = default;
};

struct ModelSpec {
  std::string ticker;
  std::string aspect;
  int lag = 0;
  ControlSet controls;

  std::string label() const;  // "ticker/aspect/lag"
  bool operator==(const ModelSpec&) const = default;
};

/// Regression rows after lag alignment. Column 0 is the intercept and
/// column 1 the treatment; controls follow in a fixed order.
struct DesignMatrix {
  static constexpr std::size_t kIntercept = 0;
  static constexpr std::size_t kTreatment = 1;

  std::vector<double> y;
  linalg::Matrix x;
  std::vector<std::string> names;
  std::vector<std::size_t> days;  // calendar day index of each row

  std::size_t n_obs() const { return y.size(); }
  std::size_t n_params() const { return x.cols(); }

  DesignMatrix take_rows(std::span<const std::size_t> rows) const;
  /// Copy with an extra regressor; `values` has one entry per row.
  DesignMatrix with_column(std::string name, std::span<const double> values) const;
};

/// Minimum residual degrees of freedom demanded of every fit.
inline constexpr std::size_t kMinDof = 5;

DesignMatrix build_design(const ModelSpec& spec, const signal::SentimentPanel& signals,
                          const ingest::ReturnPanel& returns);

/// Same alignment rules with the treatment and activity series supplied
/// directly (one value per calendar day). The placebo test feeds permuted
/// treatment series through here.
DesignMatrix build_design(const ModelSpec& spec, std::span<const double> treatment,
                          std::span<const double> activity_z,
                          const ingest::ReturnPanel& returns);

struct OlsFit {
  std::vector<double> coefficients;
  std::vector<double> residuals;
  linalg::Matrix xtx_inverse;
};

/// Throws DegenerateDesign when the design is rank deficient.
OlsFit ols_fit(const DesignMatrix& design);

/// Treatment coefficient only; the refutation loops call this.
double treatment_coefficient(const DesignMatrix& design);

/// floor(4 (T/100)^(2/9)).
int hac_lag_length(std::size_t t);

/// Bartlett weights w_j = 1 - j/(h+1) for j = 1..h.
std::vector<double> bartlett_weights(int h);

/// Newey-West sandwich covariance of the coefficients.
linalg::Matrix hac_covariance(const DesignMatrix& design, std::span<const double> residuals,
                              int h, const linalg::Matrix& xtx_inverse);
linalg::Matrix hac_covariance(const DesignMatrix& design, std::span<const double> residuals,
                              int h);

struct EstimationResult {
  ModelSpec spec;
  double beta = 0.0;  // daily-return units per 1 s.d. of sentiment
  double hac_se = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
  double alpha = 0.0;
  std::vector<std::string> control_names;
  std::vector<double> gamma;
  std::vector<double> residuals;
  std::size_t n_obs = 0;
  std::size_t n_params = 0;
  int hac_lag = 0;
};

/// Two-sided Student-t p-value.
double two_sided_p_value(double t_stat, double dof);

EstimationResult estimate(const DesignMatrix& design, const ModelSpec& spec);
EstimationResult estimate(const ModelSpec& spec, const signal::SentimentPanel& signals,
                          const ingest::ReturnPanel& returns);

}  // namespace refute::estimator
