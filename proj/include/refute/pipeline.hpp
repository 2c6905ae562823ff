// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refute/estimator.hpp"
#include "refute/ingest.hpp"
#include "refute/refuter.hpp"
#include "refute/signal.hpp"

namespace refute::pipeline {

enum class Scale { Raw, Bps };
Scale parse_scale(std::string_view name);
std::string_view to_string(Scale s) noexcept;
/// Multiplier applied to displayed coefficients.
double scale_factor(Scale s) noexcept;

struct RunConfig {
  std::vector<int> lags{0, 1, 2, 3};
  std::vector<std::string> tickers;  // empty: every ticker in the price file
  std::vector<std::string> aspects;  // empty: the `top_aspects` most active
  int top_aspects = 20;
  estimator::ControlSet controls;
  refuter::RefutationConfig refutation;
  std::filesystem::path out_dir;
  Scale scale = Scale::Raw;
  int workers = 1;  // 0: one per hardware thread
  ingest::FillPolicy fill_policy = ingest::FillPolicy::Fold;
  double correlation_threshold = 0.4;
  int plot_top_k = 15;

  void validate() const;
};

/// Parses the JSON config document. Unknown keys are rejected.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);
/// Canonical JSON of every field that can change results (worker count and
/// output directory excluded).
std::string canonical_config(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

/// Top-k aspects by total activity, ties broken by name. Returns all of them
/// (and sets `short_by`) when fewer than k exist.
std::vector<std::string> select_aspects(const std::map<std::string, signal::SentimentPanel>& panels,
                                        int k, int* short_by = nullptr);

enum class Status { Ok, Skipped, Untestable };
std::string_view to_string(Status s) noexcept;

struct SpecResult {
  estimator::ModelSpec spec;
  Status status = Status::Skipped;
  std::string reason;  // skip reason or the first test error
  std::optional<estimator::EstimationResult> estimate;
  std::optional<refuter::RefutationReport> refutation;
  double pearson_r = 0.0;  // lagged z against returns on the design rows
  double q_value = 1.0;    // Benjamini-Hochberg, supplementary only

  bool validated() const { return refutation && refutation->validated; }
};

struct GridResult {
  std::vector<SpecResult> specs;  // canonical order: ticker, aspect, lag
  std::vector<std::string> tickers;
  std::vector<std::string> aspects;
  std::vector<int> lags;
  std::uint64_t master_seed = 0;
  std::string config_hash;
  std::string config;  // canonical_config()
  std::vector<std::string> warnings;
  // Wall-clock data; never part of grid.json.
  double elapsed_seconds = 0.0;
  std::vector<double> spec_seconds;
  int workers = 1;
};

/// Estimates and refutes one spec; never throws for per-spec failures.
SpecResult run_spec(const estimator::ModelSpec& spec, const signal::SentimentPanel& signals,
                    const ingest::ReturnPanel& returns, const refuter::RefutationConfig& cfg);

GridResult run_grid(const RunConfig& cfg, const ingest::PriceData& prices,
                    const std::map<std::string, signal::SentimentPanel>& signals);

/// Benjamini-Hochberg adjusted p-values, same order as the input.
std::vector<double> bh_adjust(const std::vector<double>& p);

double pearson(std::span<const double> x, std::span<const double> y);

struct ComparisonRow {
  estimator::ModelSpec spec;
  double abs_r = 0.0;
  double abs_beta = 0.0;
  bool validated = false;
  bool flagged = false;  // |r| >= threshold yet refuted
};

/// One row per estimated spec, in canonical order.
std::vector<ComparisonRow> compare_correlation(const GridResult& result, double threshold);
/// Recomputes |r| from the panels instead of the stored values.
std::vector<ComparisonRow> compare_correlation(
    const GridResult& result, const ingest::PriceData& prices,
    const std::map<std::string, signal::SentimentPanel>& signals, double threshold);

/// Estimated specs sorted validated first, then by descending |t|.
std::vector<const SpecResult*> ranked(const GridResult& result);

void write_matrix(std::ostream& out, const GridResult& result, Scale scale);
void write_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows, Scale scale);
/// Trading days in the cumulative "monthly" effect column.
inline constexpr int kTradingMonth = 20;
/// One row per estimated spec in ranked order: beta, CI and the linear
/// month-cumulative effect kTradingMonth * beta.
void write_effects(std::ostream& out, const GridResult& result, Scale scale);
void write_grid_json(std::ostream& out, const GridResult& result);
GridResult read_grid_json(std::istream& in);
void write_timings(std::ostream& out, const GridResult& result);

void write_ci_plot(std::ostream& out, const GridResult& result, int top_k, Scale scale);
void write_lag_profile(std::ostream& out, const GridResult& result, const std::string& ticker,
                       const std::string& aspect, Scale scale);
void write_heatmap(std::ostream& out, const GridResult& result, Scale scale);
void write_deflation_plot(std::ostream& out, const std::vector<ComparisonRow>& rows,
                          Scale scale);

/// Writes matrix.csv, effects.csv, grid.json, comparison.csv, timings.json
/// and plots/.
void emit_all(const GridResult& result, const std::filesystem::path& dir, Scale scale,
              int plot_top_k, double correlation_threshold);

}  // namespace refute::pipeline
