// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "refute/estimator.hpp"
#include "refute/ingest.hpp"
#include "refute/rng.hpp"
#include "refute/signal.hpp"

namespace testing {

inline std::vector<double> normals(refute::RandomStream& rng, std::size_t n, double sd = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = sd * rng.normal();
  return v;
}

/// Return panel whose day-t return is r[t] (r[0] unused).
inline refute::ingest::ReturnPanel panel_from_returns(const std::vector<double>& r,
                                                      std::string ticker = "T") {
  refute::ingest::ReturnPanel p;
  p.ticker = std::move(ticker);
  p.adj_close.assign(r.size(), 100.0);
  for (std::size_t t = 1; t < r.size(); ++t) p.adj_close[t] = p.adj_close[t - 1] * (1.0 + r[t]);
  for (std::size_t t = 1; t < r.size(); ++t) p.returns.push_back(r[t]);
  return p;
}

/// Sentiment panel with the given z and activity z, bypassing counts.
inline refute::signal::SentimentPanel signal_panel(std::vector<double> z, std::vector<double> act,
                                                   std::string aspect = "a") {
  refute::signal::SentimentPanel p;
  p.aspect = std::move(aspect);
  p.net_ratio = z;
  p.activity.assign(z.size(), 1);
  p.z = std::move(z);
  p.activity_z = std::move(act);
  p.sd = 1.0;
  p.active = true;
  p.total_activity = static_cast<std::int64_t>(p.z.size());
  return p;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace testing
