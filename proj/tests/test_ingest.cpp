// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "refute/error.hpp"
#include "refute/ingest.hpp"
#include "refute/rng.hpp"

using namespace refute;
using namespace refute::ingest;

namespace {

PriceData prices(const std::string& csv) {
  std::istringstream in(csv);
  return parse_prices(in, "prices.csv");
}

SentimentData sentiment(const std::string& csv, const TradingCalendar& cal,
                        FillPolicy policy = FillPolicy::Fold) {
  std::istringstream in(csv);
  return parse_sentiment(in, cal, policy, "sentiment.csv");
}

Date day(const char* iso) { return *Date::parse(iso); }

}  // namespace

TEST_CASE("dates parse, print and know their weekday") {
  CHECK(day("2022-10-03").iso() == "2022-10-03");
  CHECK(day("2022-10-03").weekday() == 1);
  CHECK(day("2022-10-08").is_weekend());
  CHECK(day("2024-02-29").iso() == "2024-02-29");
  CHECK_FALSE(Date::parse("2023-02-29"));
  CHECK_FALSE(Date::parse("2022/10/03"));
  CHECK_FALSE(Date::parse("2022-10-3"));
  CHECK(day("2022-12-31") + 1 == day("2023-01-01"));
}

TEST_CASE("two-day price file gives one simple return") {
  const auto p = prices("date,ticker,adj_close\n2022-10-03,BP,100\n2022-10-04,BP,101\n");
  REQUIRE(p.calendar.size() == 2);
  REQUIRE(p.panels.at("BP").returns.size() == 1);
  CHECK(p.panels.at("BP").returns[0] == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(p.panels.at("BP").return_on(1) == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("constant prices give zero returns; header order and BOM are free") {
  const auto p = prices(
      "\xEF\xBB\xBF" "adj_close,date,ticker\n100,2022-10-03,X\n100,2022-10-04,X\n100,2022-10-05,X\n");
  CHECK(p.panels.at("X").returns == std::vector<double>{0.0, 0.0});
}

TEST_CASE("staggered holidays: the calendar is the exact date intersection") {
  RandomStream rng(3, 1);
  const std::vector<std::string> tickers = {"A", "B", "C"};
  std::vector<std::set<Date>> held(3);
  std::ostringstream csv;
  csv << "date,ticker,adj_close\n";
  const Date start = day("2022-10-03");
  for (int i = 0; i < 60; ++i) {
    const Date d = start + i;
    if (d.is_weekend()) continue;
    for (int k = 0; k < 3; ++k) {
      if (rng.uniform() < 0.1) continue;  // this ticker's holiday
      held[static_cast<std::size_t>(k)].insert(d);
      csv << d.iso() << ',' << tickers[static_cast<std::size_t>(k)] << ',' << 50 + rng.uniform() << '\n';
    }
  }
  // Brute-force oracle: a date survives iff every ticker holds it.
  std::vector<Date> expect;
  for (int i = 0; i < 60; ++i) {
    const Date d = start + i;
    if (held[0].count(d) && held[1].count(d) && held[2].count(d)) expect.push_back(d);
  }
  const auto p = prices(csv.str());
  CHECK(p.calendar.dates() == expect);
  for (const auto& t : tickers) CHECK(p.panels.at(t).adj_close.size() == expect.size());
}

TEST_CASE("price errors carry kinds and line numbers") {
  try {
    prices("date,ticker,adj_close\n2022-10-03,BP,100\n2022-10-04,BP,abc\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.kind() == ErrorKind::Parse);
  }
  try {
    prices("date,ticker,adj_close\n2022-10-03,BP,100\n2022-10-04,BP,-1\n");
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
  }
  try {
    prices("date,ticker,adj_close\n2022-10-03,BP,100\n2022-10-04,XOM,100\n");
    FAIL("expected insufficient data");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientData);
  }
  CHECK_THROWS_AS(prices("date,ticker\n2022-10-03,BP\n"), ParseError);
  CHECK_THROWS_AS(prices("date,ticker,adj_close\n2022-13-03,BP,1\n"), ParseError);
  CHECK_THROWS_AS(prices("date,ticker,adj_close\n2022-10-03,BP,1\n2022-10-03,BP,2\n"), ParseError);
}

TEST_CASE("sentiment pass-through and zero fill of missing days") {
  const TradingCalendar cal({day("2022-10-03"), day("2022-10-04"), day("2022-10-05")});
  const auto s = sentiment(
      "date,aspect,pos,neg,neu\n2022-10-03,economy,3,1,6\n2022-10-05,economy,1,2,0\n"
      "2022-10-03,market,1,1,1\n2022-10-04,market,2,2,2\n2022-10-05,market,3,3,3\n",
      cal);
  CHECK(s.at("economy").days[0] == DailyCounts{3, 1, 6});
  CHECK(s.at("economy").days[1] == DailyCounts{0, 0, 0});
  CHECK(s.at("market").days[2] == DailyCounts{3, 3, 3});
}

TEST_CASE("weekend rows fold into Monday under the fold policy") {
  const TradingCalendar cal({day("2022-10-07"), day("2022-10-10"), day("2022-10-11")});
  const std::string csv =
      "date,aspect,pos,neg,neu\n2022-10-07,a,1,0,0\n2022-10-08,a,2,1,4\n"
      "2022-10-09,a,5,3,1\n2022-10-10,a,7,2,2\n2022-10-12,a,9,9,9\n2022-10-06,a,9,9,9\n";
  const auto fold = sentiment(csv, cal, FillPolicy::Fold);
  // Hand sum Sat + Sun + Mon.
  CHECK(fold.at("a").days[1] == DailyCounts{2 + 5 + 7, 1 + 3 + 2, 4 + 1 + 2});
  CHECK(fold.at("a").days[0] == DailyCounts{1, 0, 0});
  CHECK(fold.at("a").days[2] == DailyCounts{0, 0, 0});
  for (auto policy : {FillPolicy::Drop, FillPolicy::Zero}) {
    const auto drop = sentiment(csv, cal, policy);
    CHECK(drop.at("a").days[1] == DailyCounts{7, 2, 2});
  }
}

TEST_CASE("randomized fold matches an independent accumulation") {
  RandomStream rng(4, 4);
  std::vector<Date> trading;
  const Date start = day("2022-10-03");
  for (int i = 0; i < 40; ++i)
    if (!(start + i).is_weekend() && rng.uniform() > 0.05) trading.push_back(start + i);
  const TradingCalendar cal(trading);
  std::ostringstream csv;
  csv << "date,aspect,pos,neg,neu\n";
  std::vector<DailyCounts> expect(cal.size());
  for (int i = 0; i < 40; ++i) {
    const Date d = start + i;
    const DailyCounts c{static_cast<std::int64_t>(rng.below(20)), static_cast<std::int64_t>(rng.below(20)),
                        static_cast<std::int64_t>(rng.below(20))};
    csv << d.iso() << ",x," << c.pos << ',' << c.neg << ',' << c.neu << '\n';
    for (std::size_t k = 0; k < trading.size(); ++k) {
      if (trading[k] >= d) {
        if (d >= trading.front()) {
          expect[k].pos += c.pos;
          expect[k].neg += c.neg;
          expect[k].neu += c.neu;
        }
        break;
      }
    }
  }
  CHECK(sentiment(csv.str(), cal).at("x").days == expect);
}

TEST_CASE("sentiment errors") {
  const TradingCalendar cal({day("2022-10-03"), day("2022-10-04")});
  try {
    sentiment("date,aspect,pos,neg,neu\n2022-10-03,a,-1,0,0\n", cal);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
  }
  try {
    parse_fill_policy("forward");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
  CHECK_THROWS_AS(sentiment("date,aspect,pos,neg,neu\n2022-10-03,a,1.5,0,0\n", cal), ParseError);
}

TEST_CASE("writers round-trip through the parsers") {
  RandomStream rng(8, 8);
  std::ostringstream csv;
  csv << "date,ticker,adj_close\n";
  for (int i = 0; i < 10; ++i)
    for (const char* t : {"AA", "BB"})
      csv << (day("2022-10-03") + i).iso() << ',' << t << ',' << 10 + 90 * rng.uniform() << '\n';
  const auto p = prices(csv.str());
  std::ostringstream out;
  write_prices(out, p);
  const auto q = prices(out.str());
  CHECK(q.calendar == p.calendar);
  CHECK(q.panels.at("AA").adj_close == p.panels.at("AA").adj_close);
  CHECK(q.panels.at("BB").returns == p.panels.at("BB").returns);

  SentimentData s;
  s["a"].aspect = "a";
  for (std::size_t t = 0; t < p.calendar.size(); ++t)
    s["a"].days.push_back({static_cast<std::int64_t>(t), 2, 3});
  std::ostringstream sout;
  write_sentiment(sout, p.calendar, s);
  CHECK(sentiment(sout.str(), p.calendar).at("a").days == s["a"].days);
}
