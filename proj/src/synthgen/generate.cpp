// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "detail.hpp"
#include "refute/error.hpp"
#include "refute/signal.hpp"

namespace refute::synthgen {

namespace detail {

ingest::TradingCalendar weekday_calendar(Date start, int days) {
  std::vector<Date> dates;
  for (Date d = start; static_cast<int>(dates.size()) < days; d = d + 1)
    if (!d.is_weekend()) dates.push_back(d);
  return ingest::TradingCalendar(std::move(dates));
}

RandomStream stream(std::uint64_t seed, std::string_view role, std::string_view name) {
  std::string key(role);
  key += ':';
  key += name;
  return RandomStream(seed, hash64(key, 0x73796e7468ULL));
}

std::vector<double> ar1(RandomStream& rng, std::size_t n, double phi) {
  std::vector<double> x(n);
  const double innov = std::sqrt(1.0 - phi * phi);
  for (std::size_t t = 0; t < n; ++t)
    x[t] = t == 0 ? rng.normal() : phi * x[t - 1] + innov * rng.normal();
  return x;
}

std::vector<double> lognormal_volume(RandomStream& rng, std::size_t n, double base,
                                     double dispersion) {
  std::vector<double> v(n);
  for (auto& x : v) x = base * std::exp(dispersion * rng.normal() - 0.5 * dispersion * dispersion);
  return v;
}

std::vector<double> intended_sentiment(const std::vector<double>& latent, double scale) {
  std::vector<double> s(latent.size());
  for (std::size_t t = 0; t < s.size(); ++t) s[t] = std::clamp(scale * latent[t], -1.0, 1.0);
  return s;
}

ingest::RawSentimentPanel synth_counts(const std::string& aspect, const std::vector<double>& s,
                                       const std::vector<double>& volume, double neutral_rate,
                                       RandomStream& neutral) {
  ingest::RawSentimentPanel p;
  p.aspect = aspect;
  p.days.resize(s.size());
  for (std::size_t t = 0; t < s.size(); ++t) {
    const double v = std::max(0.0, volume[t]);
    p.days[t].pos = std::llround(v * (1.0 + s[t]) / 2.0);
    p.days[t].neg = std::llround(v * (1.0 - s[t]) / 2.0);
    p.days[t].neu = static_cast<std::int64_t>(neutral.poisson(neutral_rate * v));
  }
  return p;
}

ingest::ReturnPanel integrate(const std::string& ticker, const std::vector<double>& r) {
  ingest::ReturnPanel p;
  p.ticker = ticker;
  p.adj_close.resize(r.size());
  p.adj_close[0] = 100.0;
  for (std::size_t t = 1; t < r.size(); ++t) {
    if (!(1.0 + r[t] > 0.0))
      throw Error(ErrorKind::Generation, ticker + ": return below -100% on day " + std::to_string(t));
    p.adj_close[t] = p.adj_close[t - 1] * (1.0 + r[t]);
  }
  for (std::size_t t = 1; t < r.size(); ++t)
    p.returns.push_back(p.adj_close[t] / p.adj_close[t - 1] - 1.0);
  return p;
}

void check_dispersion(const ingest::SentimentData& data) {
  for (const auto& [name, raw] : data) {
    if (!signal::build_panel(raw).active)
      throw Error(ErrorKind::Generation,
                  "aspect '" + name + "' has constant sentiment; raise sentiment_scale or volume");
  }
}

}  // namespace detail


Generated generate(const Scenario& sc) {
  sc.validate();
  if (sc.fixture == "table1") return table1_fixture(sc.seed);
  const auto n = static_cast<std::size_t>(sc.days);
  Generated g;
  g.prices.calendar = detail::weekday_calendar(sc.start, sc.days);

  std::map<std::string, std::vector<double>> ret;
  for (const auto& t : sc.tickers) {
    auto rng = detail::stream(sc.seed, "noise", t.name);
    auto& r = ret[t.name];
    r.resize(n);
    for (auto& x : r) x = t.alpha + t.noise_vol * rng.normal();
  }

  for (const auto& a : sc.aspects) {
    auto lat_rng = detail::stream(sc.seed, "latent", a.name);
    auto z = detail::ar1(lat_rng, n, sc.persistence);
    auto vol_rng = detail::stream(sc.seed, "volume", a.name);
    auto v = detail::lognormal_volume(vol_rng, n, sc.base_volume * a.volume_scale,
                                      sc.volume_dispersion);
    z = signal::z_normalize(z);  // planted beta is per sample s.d.
    if (a.kind == AspectKind::Confounded) {
      auto u_rng = detail::stream(sc.seed, "driver", a.name);
      std::vector<double> u(n, 0.0);
      if (a.events == 0) {
        for (auto& x : u) x = u_rng.normal();
      } else {
        std::vector<std::size_t> days(n);
        for (std::size_t t = 0; t < n; ++t) days[t] = t;
        const double size = std::sqrt(static_cast<double>(n) / a.events);
        for (std::size_t i = 0; i < static_cast<std::size_t>(a.events); ++i) {
          std::swap(days[i], days[i + u_rng.below(n - i)]);
          u[days[i]] = u_rng.uniform() < 0.5 ? -size : size;
        }
      }
      const double rest = std::sqrt(1.0 - a.rho * a.rho);
      for (std::size_t t = 0; t < n; ++t) {
        z[t] = a.rho * u[t] + rest * z[t];
        v[t] *= std::exp(a.kappa * u[t] - 0.5 * a.kappa * a.kappa);
      }
      z = signal::z_normalize(z);
      for (const auto& e : a.effects)
        for (std::size_t t = 0; t < n; ++t) ret[e.ticker][t] += e.beta * u[t];
      g.driver[a.name] = std::move(u);
    } else {
      for (const auto& e : a.effects)
        for (std::size_t t = static_cast<std::size_t>(e.lag); t < n; ++t)
          ret[e.ticker][t] += e.beta * z[t - static_cast<std::size_t>(e.lag)];
    }
    auto s = detail::intended_sentiment(z, sc.sentiment_scale);
    auto neu_rng = detail::stream(sc.seed, "neutral", a.name);
    g.sentiment[a.name] = detail::synth_counts(a.name, s, v, sc.neutral_rate, neu_rng);
    g.latent[a.name] = std::move(z);
    g.intended_s[a.name] = std::move(s);
    g.volume[a.name] = std::move(v);
  }
  detail::check_dispersion(g.sentiment);
  for (const auto& [name, r] : ret) g.prices.panels[name] = detail::integrate(name, r);
  return g;
}

void write_truth(std::ostream& out, const Scenario& sc, const Generated& g) {
  using nlohmann::json;
  json tickers = json::array();
  for (const auto& t : sc.tickers)
    tickers.push_back({{"name", t.name}, {"noise_vol", t.noise_vol}, {"alpha", t.alpha}});
  json aspects = json::array();
  json planted = json::array();
  for (const auto& a : sc.aspects) {
    json effects = json::array();
    for (const auto& e : a.effects) {
      effects.push_back({{"ticker", e.ticker}, {"lag", e.lag}, {"beta", e.beta}});
      if (a.kind == AspectKind::Planted)
        planted.push_back({{"ticker", e.ticker}, {"aspect", a.name}, {"lag", e.lag}, {"beta", e.beta}});
    }
    json entry = {{"name", a.name}, {"kind", to_string(a.kind)}, {"effects", effects},
                  {"volume_scale", a.volume_scale}};
    if (a.kind == AspectKind::Confounded) {
      entry["rho"] = a.rho;
      entry["kappa"] = a.kappa;
      entry["events"] = a.events;
    }
    aspects.push_back(entry);
  }
  json dates = json::array();
  for (const auto& d : g.prices.calendar.dates()) dates.push_back(d.iso());
  json j = {{"seed", sc.seed},
            {"days", sc.days},
            {"start", sc.start.iso()},
            {"fixture", sc.fixture},
            {"base_volume", sc.base_volume},
            {"volume_dispersion", sc.volume_dispersion},
            {"neutral_rate", sc.neutral_rate},
            {"persistence", sc.persistence},
            {"sentiment_scale", sc.sentiment_scale},
            {"tickers", tickers},
            {"aspects", aspects},
            {"planted", planted},
            {"dates", dates},
            {"latent", g.latent},
            {"intended_s", g.intended_s},
            {"driver", g.driver},
            {"volume", g.volume}};
  if (sc.fixture == "table1") {
    json rows = json::array();
    for (const auto& r : table1_rows())
      rows.push_back({{"ticker", r.ticker}, {"aspect", r.aspect}, {"lag", r.lag}, {"pass", r.pass}});
    j["expected_rows"] = rows;
  }
  out << j.dump(1) << '\n';
}

void write_outputs(const Scenario& sc, const Generated& g, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create " + dir.string() + ": " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw io_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("prices.csv");
    ingest::write_prices(out, g.prices);
  }
  {
    auto out = open("sentiment.csv");
    ingest::write_sentiment(out, g.prices.calendar, g.sentiment);
  }
  {
    auto out = open("truth.json");
    write_truth(out, sc, g);
  }
}

}  // namespace refute::synthgen
