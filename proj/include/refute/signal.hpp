// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "refute/ingest.hpp"

namespace refute::signal {

/// (pos - neg) / max(pos + neg, 1). Always in [-1, 1].
double net_ratio(std::int64_t pos, std::int64_t neg) noexcept;

/// pos + neg + neu.
std::int64_t activity(std::int64_t pos, std::int64_t neg, std::int64_t neu) noexcept;

struct Standardized {
  std::vector<double> z;
  double mean = 0.0;
  double sd = 0.0;  // population convention (divide by T)
};

/// Full-sample z-scores with population dispersion. A constant series maps
/// to all zeros with sd == 0. Throws InsufficientData below two points.
Standardized standardize(std::span<const double> series);

inline std::vector<double> z_normalize(std::span<const double> series) {
  return standardize(series).z;
}

struct SentimentPanel {
  std::string aspect;
  std::vector<double> net_ratio;       // s per day
  std::vector<std::int64_t> activity;  // per day
  std::vector<double> z;               // standardized s
  std::vector<double> activity_z;      // standardized activity, the control
  double mean = 0.0;                   // mean of s
  double sd = 0.0;                     // dispersion of s
  std::int64_t total_activity = 0;
  /// False when sd == 0; such aspects are skipped by the grid.
  bool active = false;
};

SentimentPanel build_panel(const ingest::RawSentimentPanel& raw);
std::map<std::string, SentimentPanel> build_panels(const ingest::SentimentData& raw);

/// `date,aspect,s,activity,z` audit dump.
void write_signals(std::ostream& out, const ingest::TradingCalendar& calendar,
                   const std::map<std::string, SentimentPanel>& panels);

}  // namespace refute::signal
