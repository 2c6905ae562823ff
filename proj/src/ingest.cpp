// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include "refute/ingest.hpp"

#include <algorithm>
#include <iterator>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "refute/error.hpp"

namespace refute::ingest {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Maps the required column names onto their positions in the header row.
std::vector<std::size_t> header_positions(std::string_view header,
                                          const std::vector<std::string_view>& required,
                                          std::string_view source) {
  if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
  const auto cols = split(header);
  std::vector<std::size_t> pos;
  for (auto name : required) {
    auto it = std::find(cols.begin(), cols.end(), name);
    if (it == cols.end())
      throw ParseError(source, 1, "missing column '" + std::string(name) + "'");
    pos.push_back(static_cast<std::size_t>(it - cols.begin()));
  }
  return pos;
}

Date parse_date(std::string_view s, std::string_view source, std::size_t line) {
  auto d = Date::parse(s);
  if (!d) throw ParseError(source, line, "bad date '" + std::string(s) + "'");
  return *d;
}

double parse_double(std::string_view s, std::string_view source, std::size_t line) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw ParseError(source, line, "bad number '" + std::string(s) + "'");
  return v;
}

std::int64_t parse_count(std::string_view s, std::string_view source, std::size_t line) {
  std::int64_t v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw ParseError(source, line, "bad count '" + std::string(s) + "'");
  return v;
}

template <class Fn>
void for_each_row(std::istream& in, std::string_view source,
                  const std::vector<std::string_view>& required, Fn&& fn) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "empty file");
  const auto pos = header_positions(line, required, source);
  const std::size_t need = *std::max_element(pos.begin(), pos.end()) + 1;
  std::size_t lineno = 1;
  std::vector<std::string_view> fields(required.size());
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cols = split(line);
    if (cols.size() < need) throw ParseError(source, lineno, "too few fields");
    for (std::size_t i = 0; i < pos.size(); ++i) fields[i] = cols[pos[i]];
    fn(lineno, fields);
  }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  return in;
}

}  // namespace

TradingCalendar::TradingCalendar(std::vector<Date> dates) : dates_(std::move(dates)) {
  for (std::size_t i = 1; i < dates_.size(); ++i)
    if (!(dates_[i - 1] < dates_[i]))
      throw validation_error("calendar dates must be strictly increasing");
}

std::optional<std::size_t> TradingCalendar::index_of(Date d) const {
  auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
  if (it == dates_.end() || *it != d) return std::nullopt;
  return static_cast<std::size_t>(it - dates_.begin());
}

std::optional<std::size_t> TradingCalendar::next_after(Date d) const {
  auto it = std::upper_bound(dates_.begin(), dates_.end(), d);
  if (it == dates_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - dates_.begin());
}

FillPolicy parse_fill_policy(std::string_view name) {
  if (name == "fold") return FillPolicy::Fold;
  if (name == "drop") return FillPolicy::Drop;
  if (name == "zero") return FillPolicy::Zero;
  throw config_error("unknown fill policy '" + std::string(name) + "' (fold|drop|zero)");
}

std::string_view to_string(FillPolicy p) noexcept {
  switch (p) {
    case FillPolicy::Fold: return "fold";
    case FillPolicy::Drop: return "drop";
    case FillPolicy::Zero: return "zero";
  }
  return "fold";
}

PriceData parse_prices(std::istream& in, std::string_view source, CalendarPolicy) {
  std::map<std::string, std::map<Date, double>> raw;
  for_each_row(in, source, {"date", "ticker", "adj_close"},
               [&](std::size_t line, const std::vector<std::string_view>& f) {
                 const Date d = parse_date(f[0], source, line);
                 if (f[1].empty()) throw ParseError(source, line, "empty ticker");
                 const double px = parse_double(f[2], source, line);
                 if (!(px > 0.0))
                   throw validation_error(std::string(source) + ":" + std::to_string(line) +
                                          ": non-positive price for " + std::string(f[1]));
                 auto& series = raw[std::string(f[1])];
                 if (!series.emplace(d, px).second)
                   throw ParseError(source, line, "duplicate row for " + std::string(f[1]) +
                                                      " on " + d.iso());
               });
  if (raw.empty()) throw insufficient_data(std::string(source) + ": no price rows");

  std::set<Date> common;
  bool first = true;
  for (const auto& [ticker, series] : raw) {
    std::set<Date> dates;
    for (const auto& [d, px] : series) dates.insert(d);
    if (first) {
      common = std::move(dates);
      first = false;
    } else {
      std::set<Date> keep;
      std::set_intersection(common.begin(), common.end(), dates.begin(), dates.end(),
                            std::inserter(keep, keep.end()));
      common = std::move(keep);
    }
  }
  if (common.size() < 2)
    throw insufficient_data(std::string(source) + ": fewer than 2 common trading dates");

  PriceData out;
  out.calendar = TradingCalendar(std::vector<Date>(common.begin(), common.end()));
  for (const auto& [ticker, series] : raw) {
    ReturnPanel panel;
    panel.ticker = ticker;
    panel.adj_close.reserve(common.size());
    for (Date d : out.calendar.dates()) panel.adj_close.push_back(series.at(d));
    panel.returns.reserve(common.size() - 1);
    for (std::size_t t = 1; t < panel.adj_close.size(); ++t)
      panel.returns.push_back(panel.adj_close[t] / panel.adj_close[t - 1] - 1.0);
    out.panels.emplace(ticker, std::move(panel));
  }
  return out;
}

PriceData load_prices(const std::filesystem::path& path, CalendarPolicy policy) {
  auto in = open_or_throw(path);
  return parse_prices(in, path.string(), policy);
}

SentimentData parse_sentiment(std::istream& in, const TradingCalendar& calendar,
                              FillPolicy policy, std::string_view source) {
  if (calendar.empty()) throw insufficient_data("empty trading calendar");
  SentimentData out;
  for_each_row(in, source, {"date", "aspect", "pos", "neg", "neu"},
               [&](std::size_t line, const std::vector<std::string_view>& f) {
                 const Date d = parse_date(f[0], source, line);
                 if (f[1].empty()) throw ParseError(source, line, "empty aspect");
                 const DailyCounts c{parse_count(f[2], source, line),
                                     parse_count(f[3], source, line),
                                     parse_count(f[4], source, line)};
                 if (c.pos < 0 || c.neg < 0 || c.neu < 0)
                   throw validation_error(std::string(source) + ":" + std::to_string(line) +
                                          ": negative count");
                 auto [it, inserted] = out.try_emplace(std::string(f[1]));
                 if (inserted) {
                   it->second.aspect = it->first;
                   it->second.days.assign(calendar.size(), DailyCounts{});
                 }
                 std::optional<std::size_t> day = calendar.index_of(d);
                 // Rows before the first trading day lie outside the sample and are
                 // never folded.
                 if (!day && policy == FillPolicy::Fold && calendar[0] < d)
                   day = calendar.next_after(d);
                 if (!day) return;
                 auto& slot = it->second.days[*day];
                 slot.pos += c.pos;
                 slot.neg += c.neg;
                 slot.neu += c.neu;
               });
  return out;
}

SentimentData load_sentiment(const std::filesystem::path& path, const TradingCalendar& calendar,
                             FillPolicy policy) {
  auto in = open_or_throw(path);
  return parse_sentiment(in, calendar, policy, path.string());
}

void write_prices(std::ostream& out, const PriceData& data) {
  out << "date,ticker,adj_close\n";
  char buf[64];
  for (std::size_t t = 0; t < data.calendar.size(); ++t) {
    const std::string date = data.calendar[t].iso();
    for (const auto& [ticker, panel] : data.panels) {
      std::snprintf(buf, sizeof buf, "%.17g", panel.adj_close[t]);
      out << date << ',' << ticker << ',' << buf << '\n';
    }
  }
}

void write_sentiment(std::ostream& out, const TradingCalendar& calendar,
                     const SentimentData& data) {
  out << "date,aspect,pos,neg,neu\n";
  for (std::size_t t = 0; t < calendar.size(); ++t) {
    const std::string date = calendar[t].iso();
    for (const auto& [aspect, panel] : data) {
      const auto& c = panel.days[t];
      out << date << ',' << aspect << ',' << c.pos << ',' << c.neg << ',' << c.neu << '\n';
    }
  }
}

}  // namespace refute::ingest
