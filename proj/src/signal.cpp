// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include "refute/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "refute/error.hpp"
#include "refute/kernels/kernels.hpp"

namespace refute::signal {

double net_ratio(std::int64_t pos, std::int64_t neg) noexcept {
  const std::int64_t denom = std::max<std::int64_t>(pos + neg, 1);
  return static_cast<double>(pos - neg) / static_cast<double>(denom);
}

std::int64_t activity(std::int64_t pos, std::int64_t neg, std::int64_t neu) noexcept {
  return pos + neg + neu;
}

Standardized standardize(std::span<const double> series) {
  if (series.size() < 2)
    throw insufficient_data("standardization needs at least 2 observations");
  const double n = static_cast<double>(series.size());
  Standardized out;
  out.mean = kernels::sum(series) / n;
  out.sd = std::sqrt(kernels::sum_sq_dev(series, out.mean) / n);
  out.z.resize(series.size(), 0.0);
  // Dispersion at rounding level of the mean counts as degenerate.
  if (!(out.sd > 1e-14 * std::max(1.0, std::abs(out.mean)))) {
    out.sd = 0.0;
    return out;
  }
  const double inv = 1.0 / out.sd;
  for (std::size_t i = 0; i < series.size(); ++i) out.z[i] = (series[i] - out.mean) * inv;
  return out;
}

SentimentPanel build_panel(const ingest::RawSentimentPanel& raw) {
  SentimentPanel p;
  p.aspect = raw.aspect;
  const std::size_t n = raw.days.size();
  p.net_ratio.reserve(n);
  p.activity.reserve(n);
  std::vector<double> act(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& c = raw.days[t];
    p.net_ratio.push_back(net_ratio(c.pos, c.neg));
    p.activity.push_back(activity(c.pos, c.neg, c.neu));
    act[t] = static_cast<double>(p.activity.back());
    p.total_activity += p.activity.back();
  }
  auto s = standardize(p.net_ratio);
  p.z = std::move(s.z);
  p.mean = s.mean;
  p.sd = s.sd;
  p.active = s.sd > 0.0;
  p.activity_z = standardize(act).z;
  return p;
}

std::map<std::string, SentimentPanel> build_panels(const ingest::SentimentData& raw) {
  std::map<std::string, SentimentPanel> out;
  for (const auto& [aspect, panel] : raw) out.emplace(aspect, build_panel(panel));
  return out;
}

void write_signals(std::ostream& out, const ingest::TradingCalendar& calendar,
                   const std::map<std::string, SentimentPanel>& panels) {
  out << "date,aspect,s,activity,z\n";
  char buf[96];
  for (std::size_t t = 0; t < calendar.size(); ++t) {
    const std::string date = calendar[t].iso();
    for (const auto& [aspect, p] : panels) {
      std::snprintf(buf, sizeof buf, "%.17g,%lld,%.17g", p.net_ratio[t],
                    static_cast<long long>(p.activity[t]), p.z[t]);
      out << date << ',' << aspect << ',' << buf << '\n';
    }
  }
}

}  // namespace refute::signal
