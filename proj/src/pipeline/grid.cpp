// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "refute/error.hpp"
#include "refute/kernels/kernels.hpp"
#include "refute/pipeline.hpp"

namespace refute::pipeline {

using estimator::ModelSpec;

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Skipped: return "skipped";
    case Status::Untestable: return "untestable";
  }
  return "skipped";
}

std::vector<std::string> select_aspects(const std::map<std::string, signal::SentimentPanel>& panels,
                                        int k, int* short_by) {
  if (k < 1) throw config_error("select_aspects needs k >= 1");
  std::vector<const signal::SentimentPanel*> order;
  for (const auto& [name, p] : panels) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    if (a->total_activity != b->total_activity) return a->total_activity > b->total_activity;
    return a->aspect < b->aspect;
  });
  const auto want = static_cast<std::size_t>(k);
  if (short_by) *short_by = order.size() < want ? static_cast<int>(want - order.size()) : 0;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(want, order.size()); ++i) out.push_back(order[i]->aspect);
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  const double mx = kernels::sum(x.first(n)) / static_cast<double>(n);
  const double my = kernels::sum(y.first(n)) / static_cast<double>(n);
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) sxy += (x[i] - mx) * (y[i] - my);
  const double sxx = kernels::sum_sq_dev(x.first(n), mx);
  const double syy = kernels::sum_sq_dev(y.first(n), my);
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SpecResult run_spec(const ModelSpec& spec, const signal::SentimentPanel& signals,
                    const ingest::ReturnPanel& returns, const refuter::RefutationConfig& cfg) {
  SpecResult out;
  out.spec = spec;
  if (!signals.active) {
    out.reason = "inactive aspect: sentiment has zero dispersion";
    return out;
  }
  try {
    const auto design = estimator::build_design(spec, signals, returns);
    out.estimate = estimator::estimate(design, spec);
    out.pearson_r = pearson(design.x.col(estimator::DesignMatrix::kTreatment), design.y);
  } catch (const Error& e) {
    out.reason = std::string(to_string(e.kind())) + ": " + e.what();
    return out;
  }
  out.refutation = refuter::refute_all(spec, refuter::SpecPanels{signals, returns}, cfg, *out.estimate);
  const auto& rep = *out.refutation;
  out.status = rep.untestable ? Status::Untestable : Status::Ok;
  for (const std::string* err : {&rep.placebo.error, &rep.rcc.error, &rep.subset.error,
                                 &rep.bootstrap.error}) {
    if (!err->empty()) {
      out.reason = *err;
      break;
    }
  }
  return out;
}

std::vector<double> bh_adjust(const std::vector<double>& p) {
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });
  std::vector<double> q(m);
  double running = 1.0;
  for (std::size_t r = m; r-- > 0;) {
    const auto i = order[r];
    running = std::min(running, p[i] * static_cast<double>(m) / static_cast<double>(r + 1));
    q[i] = running;
  }
  return q;
}

GridResult run_grid(const RunConfig& cfg, const ingest::PriceData& prices,
                    const std::map<std::string, signal::SentimentPanel>& signals) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  GridResult g;
  g.master_seed = cfg.refutation.master_seed;
  g.config = canonical_config(cfg);
  g.config_hash = config_hash(cfg);
  g.lags = cfg.lags;

  if (cfg.tickers.empty()) {
    for (const auto& [t, p] : prices.panels) g.tickers.push_back(t);
  } else {
    for (const auto& t : cfg.tickers) {
      if (!prices.panels.count(t)) throw config_error("ticker '" + t + "' not in price data");
      g.tickers.push_back(t);
    }
  }
  if (cfg.aspects.empty()) {
    int short_by = 0;
    g.aspects = select_aspects(signals, cfg.top_aspects, &short_by);
    if (short_by > 0)
      g.warnings.push_back("only " + std::to_string(g.aspects.size()) + " aspects available, " +
                           std::to_string(cfg.top_aspects) + " requested");
  } else {
    for (const auto& a : cfg.aspects) {
      if (!signals.count(a)) throw config_error("aspect '" + a + "' not in sentiment data");
      g.aspects.push_back(a);
    }
  }

  std::vector<ModelSpec> specs;
  for (const auto& t : g.tickers)
    for (const auto& a : g.aspects)
      for (int l : g.lags) specs.push_back(ModelSpec{t, a, l, cfg.controls});

  g.specs.resize(specs.size());
  g.spec_seconds.assign(specs.size(), 0.0);
  int workers = cfg.workers == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : cfg.workers;
  workers = std::clamp(workers, 1, std::max<int>(1, static_cast<int>(specs.size())));
  g.workers = workers;

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= specs.size()) return;
      const auto s0 = std::chrono::steady_clock::now();
      try {
        const auto& s = specs[i];
        g.specs[i] = run_spec(s, signals.at(s.aspect), prices.panels.at(s.ticker), cfg.refutation);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(specs.size());
        return;
      }
      g.spec_seconds[i] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count();
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> p;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.specs.size(); ++i) {
    if (g.specs[i].estimate) {
      p.push_back(g.specs[i].estimate->p_value);
      idx.push_back(i);
    }
  }
  const auto q = bh_adjust(p);
  for (std::size_t j = 0; j < idx.size(); ++j) g.specs[idx[j]].q_value = q[j];

  g.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return g;
}

std::vector<const SpecResult*> ranked(const GridResult& result) {
  std::vector<const SpecResult*> out;
  for (const auto& s : result.specs)
    if (s.estimate) out.push_back(&s);
  std::stable_sort(out.begin(), out.end(), [](const SpecResult* a, const SpecResult* b) {
    if (a->validated() != b->validated()) return a->validated();
    return std::abs(a->estimate->t_stat) > std::abs(b->estimate->t_stat);
  });
  return out;
}

std::vector<ComparisonRow> compare_correlation(const GridResult& result, double threshold) {
  std::vector<ComparisonRow> rows;
  for (const auto& s : result.specs) {
    if (!s.estimate) continue;
    ComparisonRow r;
    r.spec = s.spec;
    r.abs_r = std::abs(s.pearson_r);
    r.abs_beta = std::abs(s.estimate->beta);
    r.validated = s.validated();
    r.flagged = r.abs_r >= threshold && !r.validated;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ComparisonRow> compare_correlation(
    const GridResult& result, const ingest::PriceData& prices,
    const std::map<std::string, signal::SentimentPanel>& signals, double threshold) {
  auto rows = compare_correlation(result, threshold);
  for (auto& r : rows) {
    const auto d = estimator::build_design(r.spec, signals.at(r.spec.aspect),
                                           prices.panels.at(r.spec.ticker));
    r.abs_r = std::abs(pearson(d.x.col(estimator::DesignMatrix::kTreatment), d.y));
    r.flagged = r.abs_r >= threshold && !r.validated;
  }
  return rows;
}

}  // namespace refute::pipeline
