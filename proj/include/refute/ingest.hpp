// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "refute/date.hpp"

namespace refute::ingest {

/// Ordered trading days. Everything downstream addresses days by their
/// ordinal index into this list.
class TradingCalendar {
 public:
  TradingCalendar() = default;
  /// Throws Validation unless `dates` is strictly increasing.
  explicit TradingCalendar(std::vector<Date> dates);

  std::size_t size() const { return dates_.size(); }
  bool empty() const { return dates_.empty(); }
  const std::vector<Date>& dates() const { return dates_; }
  Date operator[](std::size_t i) const { return dates_[i]; }

  std::optional<std::size_t> index_of(Date d) const;
  /// First trading day strictly after `d`, if any.
  std::optional<std::size_t> next_after(Date d) const;

  bool operator==(const TradingCalendar&) const = default;

 private:
  std::vector<Date> dates_;
};

struct ReturnPanel {
  std::string ticker;
  std::vector<double> adj_close;  // one per calendar day
  std::vector<double> returns;    // size() == adj_close.size() - 1

  /// Simple return on calendar day `day` (day >= 1).
  double return_on(std::size_t day) const { return returns[day - 1]; }
};

struct DailyCounts {
  std::int64_t pos = 0;
  std::int64_t neg = 0;
  std::int64_t neu = 0;

  bool operator==(const DailyCounts&) const = default;
};

struct RawSentimentPanel {
  std::string aspect;
  std::vector<DailyCounts> days;  // one per calendar day
};

enum class CalendarPolicy { Intersection };

/// How sentiment rows dated on non-trading days enter the daily series.
enum class FillPolicy {
  Fold,  ///< add the counts to the next trading day
  Drop,  ///< discard the row
  Zero,  ///< discard the row; accepted as the zero-fill spelling of Drop
};

// Aspect-days missing from the file are zero-filled under every policy.

FillPolicy parse_fill_policy(std::string_view name);
std::string_view to_string(FillPolicy p) noexcept;

struct PriceData {
  TradingCalendar calendar;
  std::map<std::string, ReturnPanel> panels;
};

using SentimentData = std::map<std::string, RawSentimentPanel>;

PriceData parse_prices(std::istream& in, std::string_view source = "<prices>",
                       CalendarPolicy policy = CalendarPolicy::Intersection);
PriceData load_prices(const std::filesystem::path& path,
                      CalendarPolicy policy = CalendarPolicy::Intersection);

SentimentData parse_sentiment(std::istream& in, const TradingCalendar& calendar,
                              FillPolicy policy = FillPolicy::Fold,
                              std::string_view source = "<sentiment>");
SentimentData load_sentiment(const std::filesystem::path& path,
                             const TradingCalendar& calendar,
                             FillPolicy policy = FillPolicy::Fold);

void write_prices(std::ostream& out, const PriceData& data);
void write_sentiment(std::ostream& out, const TradingCalendar& calendar,
                     const SentimentData& data);

}  // namespace refute::ingest
