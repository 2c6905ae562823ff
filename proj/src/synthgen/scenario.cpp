// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "refute/error.hpp"
#include "refute/synthgen.hpp"

namespace refute::synthgen {

using nlohmann::json;

namespace {

Error gen_error(const std::string& msg) { return Error(ErrorKind::Generation, msg); }

const std::vector<std::string> kTickers = {"BP", "XOM", "SHEL", "NEE", "CWEN", "BEP"};

const std::vector<std::string> kAspects = {
    "economy",  "market",    "inflation",  "investors", "finance",  "energy",
    "oil",      "gas",       "renewables", "policy",    "climate",  "earnings",
    "dividend", "regulation", "prices",    "demand",    "supply",   "technology",
    "growth",   "risk",      "trading",    "stocks",    "debt",     "rates"};

Scenario base() {
  Scenario sc;
  for (std::size_t i = 0; i < kTickers.size(); ++i)
    sc.tickers.push_back({kTickers[i], 0.012 + 0.002 * static_cast<double>(i), 0.0});
  return sc;
}

}  // namespace

AspectKind parse_aspect_kind(std::string_view name) {
  if (name == "planted") return AspectKind::Planted;
  if (name == "null") return AspectKind::Null;
  if (name == "confounded") return AspectKind::Confounded;
  throw gen_error("unknown aspect kind '" + std::string(name) + "'");
}

std::string_view to_string(AspectKind k) noexcept {
  switch (k) {
    case AspectKind::Planted: return "planted";
    case AspectKind::Null: return "null";
    case AspectKind::Confounded: return "confounded";
  }
  return "null";
}

void Scenario::validate() const {
  if (days < 10) throw gen_error("scenario needs at least 10 days");
  if (tickers.empty() || aspects.empty()) throw gen_error("scenario needs tickers and aspects");
  if (!(base_volume > 0.0) || !std::isfinite(base_volume)) throw gen_error("base_volume must be > 0");
  if (!(volume_dispersion >= 0.0)) throw gen_error("volume_dispersion must be >= 0");
  if (!(neutral_rate >= 0.0)) throw gen_error("neutral_rate must be >= 0");
  if (!(std::abs(persistence) < 1.0)) throw gen_error("persistence must lie in (-1, 1)");
  if (!std::isfinite(sentiment_scale)) throw gen_error("sentiment_scale must be finite");
  if (max_lag < 0) throw gen_error("max_lag must be >= 0");
  if (!fixture.empty() && fixture != "table1") throw gen_error("unknown fixture '" + fixture + "'");
  std::set<std::string> names;
  for (const auto& t : tickers) {
    if (t.name.empty() || !names.insert(t.name).second)
      throw gen_error("ticker names must be unique and non-empty");
    if (!(t.noise_vol >= 0.0) || !std::isfinite(t.noise_vol) || !std::isfinite(t.alpha))
      throw gen_error("ticker " + t.name + ": bad noise_vol or alpha");
  }
  std::set<std::string> aspect_names;
  for (const auto& a : aspects) {
    if (a.name.empty() || !aspect_names.insert(a.name).second)
      throw gen_error("aspect names must be unique and non-empty");
    if (!(a.volume_scale > 0.0)) throw gen_error("aspect " + a.name + ": volume_scale must be > 0");
    if (a.kind == AspectKind::Confounded && !(std::abs(a.rho) <= 1.0))
      throw gen_error("aspect " + a.name + ": rho must lie in [-1, 1]");
    if (a.events < 0 || a.events > days)
      throw gen_error("aspect " + a.name + ": events must lie in [0, days]");
    if (a.kind == AspectKind::Null && !a.effects.empty())
      throw gen_error("aspect " + a.name + ": null aspects carry no effects");
    for (const auto& e : a.effects) {
      if (!names.count(e.ticker))
        throw gen_error("aspect " + a.name + ": unknown ticker '" + e.ticker + "'");
      if (!std::isfinite(e.beta)) throw gen_error("aspect " + a.name + ": beta must be finite");
      if (e.lag < 0 || e.lag > max_lag)
        throw gen_error("aspect " + a.name + ": lag " + std::to_string(e.lag) + " outside grid");
    }
  }
}

Scenario parse_scenario(std::string_view text, std::string_view source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw gen_error(std::string(source) + ": " + e.what());
  }
  static const std::set<std::string> known = {
      "days", "start", "tickers", "aspects", "base_volume", "volume_dispersion", "neutral_rate",
      "persistence", "sentiment_scale", "max_lag", "seed"};
  Scenario sc;
  try {
    for (const auto& [k, v] : j.items())
      if (!known.count(k)) throw gen_error(std::string(source) + ": unknown key '" + k + "'");
    sc.days = j.value("days", sc.days);
    if (j.contains("start")) {
      const auto d = Date::parse(j["start"].get<std::string>());
      if (!d) throw gen_error(std::string(source) + ": bad start date");
      sc.start = *d;
    }
    sc.base_volume = j.value("base_volume", sc.base_volume);
    sc.volume_dispersion = j.value("volume_dispersion", sc.volume_dispersion);
    sc.neutral_rate = j.value("neutral_rate", sc.neutral_rate);
    sc.persistence = j.value("persistence", sc.persistence);
    sc.sentiment_scale = j.value("sentiment_scale", sc.sentiment_scale);
    sc.max_lag = j.value("max_lag", sc.max_lag);
    sc.seed = j.value("seed", sc.seed);
    for (const auto& t : j.at("tickers"))
      sc.tickers.push_back({t.at("name").get<std::string>(), t.value("noise_vol", 0.01),
                            t.value("alpha", 0.0)});
    for (const auto& a : j.at("aspects")) {
      AspectSpec spec;
      spec.name = a.at("name").get<std::string>();
      spec.kind = parse_aspect_kind(a.value("kind", std::string("null")));
      spec.rho = a.value("rho", spec.rho);
      spec.kappa = a.value("kappa", spec.kappa);
      spec.volume_scale = a.value("volume_scale", spec.volume_scale);
      spec.events = a.value("events", spec.events);
      if (a.contains("effects"))
        for (const auto& e : a["effects"])
          spec.effects.push_back(
              {e.at("ticker").get<std::string>(), e.value("lag", 0), e.at("beta").get<double>()});
      sc.aspects.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw gen_error(std::string(source) + ": " + e.what());
  }
  sc.validate();
  return sc;
}

Scenario resolve_scenario(std::string_view ref) {
  constexpr std::string_view prefix = "builtin:";
  if (ref.substr(0, prefix.size()) == prefix) return builtin(ref.substr(prefix.size()));
  std::ifstream in{std::filesystem::path(ref)};
  if (!in) throw io_error("cannot open scenario " + std::string(ref));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), ref);
}

std::vector<std::string> builtin_names() { return {"null", "power", "confounded", "table1"}; }

Scenario builtin(std::string_view name) {
  Scenario sc = base();
  if (name == "null") {
    // Volumes fall off with the index so the top-20 selection is meaningful.
    for (std::size_t i = 0; i < kAspects.size(); ++i) {
      AspectSpec a;
      a.name = kAspects[i];
      a.volume_scale = 1.5 - 0.04 * static_cast<double>(i);
      sc.aspects.push_back(a);
    }
  } else if (name == "power") {
    // One planted effect, HAC-t near 6 at T = 92: beta = 6 sigma / sqrt(n).
    sc.tickers = {{"BP", 0.012, 0.0}};
    sc.persistence = 0.0;
    AspectSpec planted{"economy", AspectKind::Planted, {{"BP", 2, 6.0 * 0.012 / std::sqrt(89.0)}}};
    sc.aspects.push_back(planted);
    for (const char* n : {"market", "inflation", "investors"}) sc.aspects.push_back({n, AspectKind::Null, {}});
  } else if (name == "confounded") {
    sc.tickers = {{"BP", 0.004, 0.0}, {"NEE", 0.004, 0.0}};
    sc.volume_dispersion = 0.02;
    sc.neutral_rate = 0.1;
    sc.base_volume = 2000.0;
    AspectSpec drv{"market", AspectKind::Confounded, {{"BP", 0, 0.01}, {"NEE", 0, 0.01}}};
    drv.rho = 0.8;
    drv.kappa = 0.3;
    drv.events = 2;
    sc.aspects.push_back(drv);
    for (const char* n : {"economy", "inflation"}) sc.aspects.push_back({n, AspectKind::Null, {}});
  } else if (name == "table1") {
    sc.fixture = "table1";
    sc.seed = 20221003;
    for (const char* n : {"economy", "market", "inflation", "investors", "finance"})
      sc.aspects.push_back({n, AspectKind::Planted, {}});
    sc.tickers.clear();
    for (const auto& t : kTickers) sc.tickers.push_back({t, 0.0, 0.0});
  } else {
    throw gen_error("unknown builtin scenario '" + std::string(name) + "'");
  }
  sc.validate();
  return sc;
}

}  // namespace refute::synthgen
