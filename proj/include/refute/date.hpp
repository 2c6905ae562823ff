// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace refute {

/// Calendar date stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days_since_epoch)
      : days_(days_since_epoch) {}

  /// Parses strict ISO-8601 `YYYY-MM-DD`.
  static std::optional<Date> parse(std::string_view iso);
  static Date from_ymd(int year, unsigned month, unsigned day);

  std::string iso() const;
  constexpr std::int32_t days() const { return days_; }
  /// 0 = Sunday ... 6 = Saturday.
  unsigned weekday() const;
  bool is_weekend() const {
    auto w = weekday();
    return w == 0 || w == 6;
  }

  constexpr Date operator+(std::int32_t n) const { return Date(days_ + n); }
  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::int32_t days_ = 0;
};

}  // namespace refute
