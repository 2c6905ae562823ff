// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>
#include <vector>

#include "refute/ingest.hpp"
#include "refute/rng.hpp"
#include "refute/synthgen.hpp"

namespace refute::synthgen::detail {

ingest::TradingCalendar weekday_calendar(Date start, int days);

RandomStream stream(std::uint64_t seed, std::string_view role, std::string_view name);

/// Stationary AR(1) with unit marginal variance.
std::vector<double> ar1(RandomStream& rng, std::size_t n, double phi);

std::vector<double> lognormal_volume(RandomStream& rng, std::size_t n, double base,
                                     double dispersion);

/// pos = round(v(1+s)/2), neg = round(v(1-s)/2), neu ~ Poisson(rate * v).
ingest::RawSentimentPanel synth_counts(const std::string& aspect, const std::vector<double>& s,
                                       const std::vector<double>& volume, double neutral_rate,
                                       RandomStream& neutral);

std::vector<double> intended_sentiment(const std::vector<double>& latent, double scale);

/// Prices from P0 = 100; r[0] is ignored.
ingest::ReturnPanel integrate(const std::string& ticker, const std::vector<double>& r);

/// Throws Generation when the recovered sentiment of some aspect is constant.
void check_dispersion(const ingest::SentimentData& data);

}  // namespace refute::synthgen::detail
