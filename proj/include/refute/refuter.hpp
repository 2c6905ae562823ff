// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "refute/estimator.hpp"
#include "refute/rng.hpp"

namespace refute::refuter {

struct RefutationConfig {
  int placebo_iters = 200;
  int rcc_confounders = 1;  // synthetic N(0,1) columns added per re-estimation
  int rcc_repeats = 1;      // independent draws; every one must keep the sign
  double subset_fraction = 0.8;
  int subset_iters = 50;
  double subset_threshold = 0.8;
  int bootstrap_iters = 500;
  double ci_level = 95.0;
  bool block_bootstrap = false;  // moving blocks of length h + 1
  std::uint64_t master_seed = 0;
  /// Share of re-estimations allowed to be degenerate before a test is
  /// declared unstable.
  double max_drop_fraction = 0.10;

  /// Throws Config on out-of-range values.
  void validate() const;
  bool operator==(const RefutationConfig&) const = default;
};

enum class TestId : std::uint32_t { Placebo = 1, RandomCommonCause = 2, Subset = 3, Bootstrap = 4 };

enum class Verdict { Pass, Fail, Error };
std::string_view to_string(Verdict v) noexcept;

/// Inputs shared by every test of one specification.
struct SpecPanels {
  const signal::SentimentPanel& signals;
  const ingest::ReturnPanel& returns;
};

/// Stream identity for (spec, test); the iteration index is the substream.
std::uint64_t stream_id(const estimator::ModelSpec& spec, TestId test);
RandomStream test_stream(const RefutationConfig& cfg, const estimator::ModelSpec& spec,
                         TestId test, std::uint32_t iteration);

/// Linear-interpolation percentile (pct in [0, 100]) of unsorted values.
double percentile(std::span<const double> values, double pct);

struct PlaceboResult {
  Verdict verdict = Verdict::Fail;
  double observed_abs = 0.0;
  double q95 = 0.0;
  double null_mean = 0.0;
  double null_sd = 0.0;
  double null_median = 0.0;
  double null_max = 0.0;
  int n_valid = 0;
  int n_dropped = 0;
  std::string error;
};

struct RccResult {
  Verdict verdict = Verdict::Fail;
  double beta_rcc = 0.0;            // first draw
  std::vector<double> betas;        // all draws
  std::string error;
};

struct SubsetResult {
  Verdict verdict = Verdict::Fail;
  double p_hat = 0.0;
  int modal_sign = 0;
  int n_positive = 0;
  int n_negative = 0;
  int n_zero = 0;
  int subsample_size = 0;
  int n_dropped = 0;
  std::string error;
};

struct BootstrapResult {
  Verdict verdict = Verdict::Fail;
  double lower = 0.0;
  double upper = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  int n_valid = 0;
  int n_dropped = 0;
  std::string error;
};

struct RefutationReport {
  estimator::ModelSpec spec;
  PlaceboResult placebo;
  RccResult rcc;
  SubsetResult subset;
  BootstrapResult bootstrap;
  bool validated = false;
  /// Some test raised an error; distinct from failing.
  bool untestable = false;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> streams;  // stream ids for tests 1..4
};

PlaceboResult placebo_test(const estimator::ModelSpec& spec, const SpecPanels& panels,
                           const RefutationConfig& cfg, const estimator::EstimationResult& observed);

/// Synthetic confounder columns for one repeat: `rcc_confounders` series of
/// one value per calendar day, aligned to rows like the treatment.
std::vector<std::vector<double>> rcc_confounders(const RefutationConfig& cfg,
                                                 const estimator::ModelSpec& spec,
                                                 std::size_t calendar_days,
                                                 std::uint32_t repeat);

RccResult random_common_cause_test(const estimator::ModelSpec& spec, const SpecPanels& panels,
                                   const RefutationConfig& cfg,
                                   const estimator::EstimationResult& observed);

SubsetResult subset_stability_test(const estimator::ModelSpec& spec, const SpecPanels& panels,
                                   const RefutationConfig& cfg,
                                   const estimator::EstimationResult& observed);

BootstrapResult bootstrap_ci_test(const estimator::ModelSpec& spec, const SpecPanels& panels,
                                  const RefutationConfig& cfg,
                                  const estimator::EstimationResult& observed);

RefutationReport refute_all(const estimator::ModelSpec& spec, const SpecPanels& panels,
                            const RefutationConfig& cfg,
                            const estimator::EstimationResult& observed);
RefutationReport refute_all(const estimator::ModelSpec& spec, const SpecPanels& panels,
                            const RefutationConfig& cfg);

}  // namespace refute::refuter
