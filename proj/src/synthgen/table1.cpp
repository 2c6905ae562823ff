// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "refute/signal.hpp"

namespace refute::synthgen {

namespace {

constexpr int kDays = 92;
const std::vector<std::string> kAspects = {"economy", "market", "inflation", "investors", "finance"};
const std::vector<std::string> kTickers = {"BP", "XOM", "SHEL", "NEE", "CWEN", "BEP"};

std::size_t first_row(int lag) { return static_cast<std::size_t>(std::max({1, lag, 2})); }

// Day in the regression window of `lag` whose treatment value has the
// largest magnitude.
std::size_t leverage_day(const std::vector<double>& z, int lag) {
  std::size_t best = first_row(lag);
  for (std::size_t t = best; t < z.size(); ++t)
    if (std::abs(z[t - lag]) > std::abs(z[best - lag])) best = t;
  return best;
}

// z residualized on an intercept and the activity control, over the rows of
// `lag`; returns (z_perp at day j, sum of z_perp^2).
std::pair<double, double> partialled(const signal::SentimentPanel& p, int lag, std::size_t j) {
  const std::size_t t0 = first_row(lag);
  const auto L = static_cast<std::size_t>(lag);
  double mz = 0, ma = 0, n = 0;
  for (std::size_t t = t0; t < p.z.size(); ++t, ++n) {
    mz += p.z[t - L];
    ma += p.activity_z[t - L];
  }
  mz /= n;
  ma /= n;
  double saa = 0, sza = 0;
  for (std::size_t t = t0; t < p.z.size(); ++t) {
    const double a = p.activity_z[t - L] - ma;
    saa += a * a;
    sza += a * (p.z[t - L] - mz);
  }
  const double g = saa > 0 ? sza / saa : 0.0;
  double ss = 0, at_j = 0;
  for (std::size_t t = t0; t < p.z.size(); ++t) {
    const double r = (p.z[t - L] - mz) - g * (p.activity_z[t - L] - ma);
    ss += r * r;
    if (t == j) at_j = r;
  }
  return {at_j, ss};
}

double sign(double v) { return v < 0 ? -1.0 : 1.0; }

}  // namespace

const std::vector<Table1Row>& table1_rows() {
  static const std::vector<Table1Row> rows = {
      {"BP", "economy", 1, {true, true, true, true}},
      {"SHEL", "economy", 1, {true, true, true, true}},
      {"NEE", "market", 2, {true, true, true, true}},
      {"NEE", "inflation", 3, {true, true, true, true}},
      {"CWEN", "investors", 2, {true, true, true, true}},
      {"XOM", "finance", 1, {false, true, true, true}},
      {"BP", "inflation", 0, {true, false, true, true}},
      {"BEP", "market", 1, {true, true, false, true}},
      {"SHEL", "investors", 0, {true, true, true, false}},
  };
  return rows;
}

pipeline::RunConfig table1_config(std::uint64_t seed) {
  pipeline::RunConfig cfg;
  cfg.tickers = kTickers;
  cfg.aspects = kAspects;
  cfg.refutation.master_seed = seed;
  cfg.scale = pipeline::Scale::Bps;
  return cfg;
}

Generated table1_fixture(std::uint64_t seed) {
  return table1_fixture(seed, table1_config(seed).refutation);
}

Generated table1_fixture(std::uint64_t seed, const refuter::RefutationConfig& refutation) {
  constexpr auto n = static_cast<std::size_t>(kDays);
  Generated g;
  g.prices.calendar = detail::weekday_calendar(Date::from_ymd(2022, 10, 3), kDays);

  for (const auto& a : kAspects) {
    auto rng = detail::stream(seed, "latent", a);
    g.latent[a] = detail::ar1(rng, n, 0.0);
  }
  // The inflation path shares most of its variation with the exact column
  // the random-common-cause test will add for BP inflation at lag 0.
  const estimator::ModelSpec bp_infl{"BP", "inflation", 0, {}};
  const auto w = refuter::rcc_confounders(refutation, bp_infl, n, 0).front();
  for (std::size_t t = 0; t < n; ++t) g.latent["inflation"][t] = 0.8 * w[t] + 0.6 * g.latent["inflation"][t];
  // Keep Shell's outlier day out of the economy regression's leverage.
  const std::size_t j_inv = leverage_day(g.latent["investors"], 0);
  g.latent["economy"][j_inv - 1] = 0.0;

  std::map<std::string, signal::SentimentPanel> panel;
  for (const auto& a : kAspects) {
    auto vrng = detail::stream(seed, "volume", a);
    g.volume[a] = detail::lognormal_volume(vrng, n, 200.0, 0.3);
    g.intended_s[a] = detail::intended_sentiment(g.latent[a], 0.35);
    auto nrng = detail::stream(seed, "neutral", a);
    g.sentiment[a] = detail::synth_counts(a, g.intended_s[a], g.volume[a], 0.5, nrng);
    panel[a] = signal::build_panel(g.sentiment[a]);
  }
  detail::check_dispersion(g.sentiment);
  const auto& ze = panel["economy"].z;
  const auto& zm = panel["market"].z;
  const auto& zi = panel["inflation"].z;
  const auto& zv = panel["investors"].z;
  const auto& zf = panel["finance"].z;

  std::map<std::string, std::vector<double>> r;
  for (const auto& t : kTickers) r[t].assign(n, 0.0);
  auto noise = [&](const std::string& ticker, double sd) {
    auto rng = detail::stream(seed, "noise", ticker);
    for (auto& x : r[ticker]) x += sd * rng.normal();
  };

  // Validated rows: clean planted effects, t well above 6.
  for (std::size_t t = 1; t < n; ++t) r["BP"][t] += 0.0036 * ze[t - 1];
  for (std::size_t t = 1; t < n; ++t) r["SHEL"][t] += 0.0060 * ze[t - 1];
  for (std::size_t t = 2; t < n; ++t) r["NEE"][t] += 0.0036 * zm[t - 2];
  for (std::size_t t = 3; t < n; ++t) r["NEE"][t] += -0.0035 * zi[t - 3];
  for (std::size_t t = 2; t < n; ++t) r["CWEN"][t] += 0.0034 * zv[t - 2];
  noise("NEE", 0.0015);
  noise("CWEN", 0.0035);

  // BP inflation, lag 0: the return loads on the confounder column and
  // negatively on sentiment. Unadjusted, sentiment proxies for the column
  // and the slope is positive; with the column added it turns negative.
  for (std::size_t t = 1; t < n; ++t) r["BP"][t] += 0.006 * w[t] - 0.0024 * zi[t];
  noise("BP", 0.0008);

  // Exxon finance, lag 1: the noise lives only on days with near-zero
  // treatment. A permuted treatment spreads those days across the whole
  // range, so the null slopes are as large as the observed one, while
  // resampling keeps the sign.
  {
    constexpr double c = 0.02;
    auto rng = detail::stream(seed, "quiet-days", "XOM");
    std::vector<double> masked(n, 0.0);
    double ss = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
      if (std::abs(zf[t - 1]) < 0.15) masked[t] = c * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      ss += masked[t] * masked[t];
    }
    const double sdy = std::sqrt(ss / static_cast<double>(n - 1));
    for (std::size_t t = 1; t < n; ++t) r["XOM"][t] += 1.4 * sdy / std::sqrt(88.0) * zf[t - 1] + masked[t];
    noise("XOM", 0.005 * c);
  }

  // Shell investors, lag 0: one high-leverage day carries a residual that
  // opposes the effect. The full-sample slope and the subsamples keep the
  // sign; resamples holding several copies of that day do not.
  {
    const std::size_t j = leverage_day(zv, 0);
    const double a = 0.15;
    const auto [zp, ss] = partialled(panel["investors"], 0, j);
    const double delta = std::abs(zp) * a / ss;
    for (std::size_t t = 1; t < n; ++t) r["SHEL"][t] += 2.35 * delta * zv[t];
    r["SHEL"][j] -= sign(zv[j]) * a;
    noise("SHEL", 0.0008);
  }

  // Brookfield market, lag 1: the slope is carried by one high-leverage
  // day against a small opposite-signed effect, so it flips whenever that
  // day is left out.
  {
    const std::size_t j = leverage_day(zm, 1);
    const double a = 0.05;
    const auto [zp, ss] = partialled(panel["market"], 1, j);
    for (std::size_t t = 1; t < n; ++t) r["BEP"][t] += -0.4 * a / ss * zm[t - 1];
    r["BEP"][j] += sign(zp) * a;
    noise("BEP", 0.0002);
  }

  for (const auto& t : kTickers) g.prices.panels[t] = detail::integrate(t, r[t]);
  return g;
}

}  // namespace refute::synthgen
