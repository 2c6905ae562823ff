// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "refute/date.hpp"
#include "refute/ingest.hpp"
#include "refute/pipeline.hpp"
#include "refute/refuter.hpp"

namespace refute::synthgen {

enum class AspectKind { Planted, Null, Confounded };
AspectKind parse_aspect_kind(std::string_view name);
std::string_view to_string(AspectKind k) noexcept;

/// For planted aspects: returns of `ticker` load `beta` on z*_{t-lag}.
/// For confounded aspects: returns of `ticker` load `beta` on the driver U_t.
struct Effect {
  std::string ticker;
  int lag = 0;
  double beta = 0.0;
};

struct AspectSpec {
  std::string name;
  AspectKind kind = AspectKind::Null;
  std::vector<Effect> effects;
  double rho = 0.8;           // confounded: corr(z*, U)
  double kappa = 0.3;         // confounded: log-volume loading on U
  double volume_scale = 1.0;  // multiplies the base volume
  /// Confounded only: 0 draws U ~ N(0,1) daily; n > 0 makes U a sparse
  /// series of n shock days of size sqrt(T/n) and random sign.
  int events = 0;
};

struct TickerSpec {
  std::string name;
  double noise_vol = 0.01;
  double alpha = 0.0;
};

struct Scenario {
  int days = 92;  // trading days, weekdays from `start`
  Date start = Date::from_ymd(2022, 10, 3);
  std::vector<TickerSpec> tickers;
  std::vector<AspectSpec> aspects;
  double base_volume = 200.0;
  double volume_dispersion = 0.3;  // sd of log volume
  double neutral_rate = 0.5;       // neutral mentions per polar mention
  double persistence = 0.3;        // AR(1) coefficient of z*
  double sentiment_scale = 0.35;   // s = clamp(scale * z*, -1, 1)
  int max_lag = 3;
  std::uint64_t seed = 1;
  /// Non-empty selects an engineered fixture ("table1") instead of the
  /// generic generator; the other fields then only describe it.
  std::string fixture;

  /// Throws Generation on invalid content.
  void validate() const;
};

Scenario parse_scenario(std::string_view text, std::string_view source = "<scenario>");
/// `builtin:NAME` or a path to a JSON scenario.
Scenario resolve_scenario(std::string_view ref);
/// null, power, confounded, table1.
Scenario builtin(std::string_view name);
std::vector<std::string> builtin_names();

struct Generated {
  ingest::PriceData prices;
  ingest::SentimentData sentiment;
  std::map<std::string, std::vector<double>> latent;      // z* per aspect
  std::map<std::string, std::vector<double>> intended_s;  // pre-quantization s
  std::map<std::string, std::vector<double>> driver;      // U for confounded aspects
  std::map<std::string, std::vector<double>> volume;      // v per aspect
};

/// Deterministic per scenario (seed included).
Generated generate(const Scenario& sc);

void write_truth(std::ostream& out, const Scenario& sc, const Generated& g);
/// prices.csv, sentiment.csv and truth.json.
void write_outputs(const Scenario& sc, const Generated& g, const std::filesystem::path& dir);

/// One row of the reproduced refutation table.
struct Table1Row {
  std::string ticker;
  std::string aspect;
  int lag;
  std::array<bool, 4> pass;  // RT1..RT4
};
const std::vector<Table1Row>& table1_rows();

/// Panels where the rows above are engineered to show their pass/fail
/// pattern. The random-common-cause row is built against the confounder
/// draw of `refutation`, so run the grid with the same refutation config
/// (table1_config supplies it).
Generated table1_fixture(std::uint64_t seed = 20221003);
Generated table1_fixture(std::uint64_t seed, const refuter::RefutationConfig& refutation);
pipeline::RunConfig table1_config(std::uint64_t seed = 20221003);

}  // namespace refute::synthgen
