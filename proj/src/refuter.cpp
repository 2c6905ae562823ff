// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include "refute/refuter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "refute/error.hpp"

namespace refute::refuter {

using estimator::DesignMatrix;
using estimator::EstimationResult;
using estimator::ModelSpec;

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Runs `fit` for every iteration; degenerate re-estimations are dropped and
// counted. Everything else propagates.
template <class Fit>
std::vector<double> collect(int iters, double max_drop, const char* what, int& dropped,
                            Fit&& fit) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(iters));
  dropped = 0;
  for (int k = 0; k < iters; ++k) {
    try {
      out.push_back(fit(static_cast<std::uint32_t>(k)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateDesign) throw;
      ++dropped;
    }
  }
  if (static_cast<double>(dropped) > max_drop * iters || out.empty())
    throw Error(ErrorKind::UnstableTest, std::string(what) + ": " + std::to_string(dropped) +
                                             " of " + std::to_string(iters) +
                                             " re-estimations were degenerate");
  return out;
}

void summarize(std::span<const double> v, double& mean, double& sd) {
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

}  // namespace

void RefutationConfig::validate() const {
  if (placebo_iters < 1 || subset_iters < 1 || bootstrap_iters < 1 || rcc_repeats < 1 ||
      rcc_confounders < 1)
    throw config_error("iteration counts must be >= 1");
  if (!(subset_fraction > 0.0 && subset_fraction < 1.0))
    throw config_error("subset_fraction must lie in (0, 1)");
  if (!(subset_threshold > 0.0 && subset_threshold <= 1.0))
    throw config_error("subset_threshold must lie in (0, 1]");
  if (!(ci_level > 0.0 && ci_level < 100.0)) throw config_error("ci_level must lie in (0, 100)");
  if (!(max_drop_fraction >= 0.0 && max_drop_fraction < 1.0))
    throw config_error("max_drop_fraction must lie in [0, 1)");
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Error: return "error";
  }
  return "error";
}

std::uint64_t stream_id(const ModelSpec& spec, TestId test) {
  std::string key = spec.ticker;
  key += '\x1f';
  key += spec.aspect;
  key += '\x1f';
  key += std::to_string(spec.lag);
  key += '\x1f';
  key += std::to_string(static_cast<std::uint32_t>(test));
  return hash64(key);
}

RandomStream test_stream(const RefutationConfig& cfg, const ModelSpec& spec, TestId test,
                         std::uint32_t iteration) {
  return RandomStream(cfg.master_seed, stream_id(spec, test), iteration);
}

double percentile(std::span<const double> values, double pct) {
  if (values.empty()) throw insufficient_data("percentile of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * pct / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

PlaceboResult placebo_test(const ModelSpec& spec, const SpecPanels& panels,
                           const RefutationConfig& cfg, const EstimationResult& observed) {
  PlaceboResult r;
  r.observed_abs = std::abs(observed.beta);
  std::vector<double> permuted(panels.signals.z.size());
  const auto null = collect(cfg.placebo_iters, cfg.max_drop_fraction, "placebo", r.n_dropped,
                            [&](std::uint32_t k) {
                              std::copy(panels.signals.z.begin(), panels.signals.z.end(),
                                        permuted.begin());
                              auto rng = test_stream(cfg, spec, TestId::Placebo, k);
                              rng.shuffle(std::span<double>(permuted));
                              const auto d = estimator::build_design(
                                  spec, permuted, panels.signals.activity_z, panels.returns);
                              return std::abs(estimator::treatment_coefficient(d));
                            });
  r.n_valid = static_cast<int>(null.size());
  r.q95 = percentile(null, 95.0);
  r.null_median = percentile(null, 50.0);
  r.null_max = *std::max_element(null.begin(), null.end());
  summarize(null, r.null_mean, r.null_sd);
  r.verdict = r.q95 < r.observed_abs ? Verdict::Pass : Verdict::Fail;
  return r;
}

std::vector<std::vector<double>> rcc_confounders(const RefutationConfig& cfg,
                                                 const ModelSpec& spec, std::size_t calendar_days,
                                                 std::uint32_t repeat) {
  auto rng = test_stream(cfg, spec, TestId::RandomCommonCause, repeat);
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(cfg.rcc_confounders),
                                        std::vector<double>(calendar_days));
  for (auto& col : cols)
    for (auto& v : col) v = rng.normal();
  return cols;
}

RccResult random_common_cause_test(const ModelSpec& spec, const SpecPanels& panels,
                                   const RefutationConfig& cfg, const EstimationResult& observed) {
  RccResult r;
  const auto base = estimator::build_design(spec, panels.signals, panels.returns);
  const int observed_sign = sign_of(observed.beta);
  bool kept = observed_sign != 0;
  for (int rep = 0; rep < cfg.rcc_repeats; ++rep) {
    const auto cols = rcc_confounders(cfg, spec, panels.returns.adj_close.size(),
                                      static_cast<std::uint32_t>(rep));
    DesignMatrix d = base;
    std::vector<double> aligned(base.n_obs());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      for (std::size_t i = 0; i < base.n_obs(); ++i)
        aligned[i] = cols[c][base.days[i] - static_cast<std::size_t>(spec.lag)];
      d = d.with_column("rcc_" + std::to_string(c), aligned);
    }
    const double b = estimator::treatment_coefficient(d);
    r.betas.push_back(b);
    // sign(0) never matches, not even another zero.
    if (sign_of(b) != observed_sign || sign_of(b) == 0) kept = false;
  }
  r.beta_rcc = r.betas.front();
  r.verdict = kept ? Verdict::Pass : Verdict::Fail;
  return r;
}

SubsetResult subset_stability_test(const ModelSpec& spec, const SpecPanels& panels,
                                   const RefutationConfig& cfg, const EstimationResult& observed) {
  SubsetResult r;
  const auto base = estimator::build_design(spec, panels.signals, panels.returns);
  const std::size_t n = base.n_obs();
  const auto m =
      static_cast<std::size_t>(std::floor(cfg.subset_fraction * static_cast<double>(n) + 1e-9));
  r.subsample_size = static_cast<int>(m);
  if (m < base.n_params() + estimator::kMinDof)
    throw config_error(spec.label() + ": subsample of " + std::to_string(m) +
                       " rows is too small");
  std::vector<std::size_t> idx(n);
  const auto betas = collect(cfg.subset_iters, cfg.max_drop_fraction, "subset", r.n_dropped,
                             [&](std::uint32_t k) {
                               std::iota(idx.begin(), idx.end(), std::size_t{0});
                               auto rng = test_stream(cfg, spec, TestId::Subset, k);
                               for (std::size_t i = 0; i < m; ++i) {
                                 const auto j = i + static_cast<std::size_t>(rng.below(n - i));
                                 std::swap(idx[i], idx[j]);
                               }
                               std::sort(idx.begin(), idx.begin() + static_cast<long>(m));
                               return estimator::treatment_coefficient(base.take_rows(
                                   std::span<const std::size_t>(idx.data(), m)));
                             });
  for (double b : betas) {
    const int s = sign_of(b);
    (s > 0 ? r.n_positive : s < 0 ? r.n_negative : r.n_zero)++;
  }
  // Mode over {+, -, 0}; ties go to the observed sign, then to +, -, 0.
  const int counts[3] = {r.n_positive, r.n_negative, r.n_zero};
  const int signs[3] = {1, -1, 0};
  const int best = *std::max_element(counts, counts + 3);
  r.modal_sign = 2;
  for (int i = 0; i < 3; ++i)
    if (counts[i] == best && signs[i] == sign_of(observed.beta)) r.modal_sign = signs[i];
  if (r.modal_sign == 2)
    for (int i = 0; i < 3; ++i)
      if (counts[i] == best) {
        r.modal_sign = signs[i];
        break;
      }
  r.p_hat = static_cast<double>(best) / static_cast<double>(betas.size());
  r.verdict = r.p_hat >= cfg.subset_threshold ? Verdict::Pass : Verdict::Fail;
  return r;
}

BootstrapResult bootstrap_ci_test(const ModelSpec& spec, const SpecPanels& panels,
                                  const RefutationConfig& cfg, const EstimationResult& observed) {
  BootstrapResult r;
  const auto base = estimator::build_design(spec, panels.signals, panels.returns);
  const std::size_t n = base.n_obs();
  const std::size_t block = cfg.block_bootstrap
                                ? std::min<std::size_t>(n, static_cast<std::size_t>(observed.hac_lag) + 1)
                                : 1;
  std::vector<std::size_t> idx;
  idx.reserve(n + block);
  const auto betas = collect(cfg.bootstrap_iters, cfg.max_drop_fraction, "bootstrap",
                             r.n_dropped, [&](std::uint32_t k) {
                               auto rng = test_stream(cfg, spec, TestId::Bootstrap, k);
                               idx.clear();
                               while (idx.size() < n) {
                                 const auto start =
                                     static_cast<std::size_t>(rng.below(n - block + 1));
                                 for (std::size_t j = 0; j < block; ++j) idx.push_back(start + j);
                               }
                               idx.resize(n);
                               return estimator::treatment_coefficient(base.take_rows(idx));
                             });
  r.n_valid = static_cast<int>(betas.size());
  const double tail = (100.0 - cfg.ci_level) / 2.0;
  r.lower = percentile(betas, tail);
  r.upper = percentile(betas, 100.0 - tail);
  summarize(betas, r.mean, r.sd);
  r.verdict = (r.lower > 0.0 || r.upper < 0.0) ? Verdict::Pass : Verdict::Fail;
  return r;
}

RefutationReport refute_all(const ModelSpec& spec, const SpecPanels& panels,
                            const RefutationConfig& cfg, const EstimationResult& observed) {
  cfg.validate();
  RefutationReport rep;
  rep.spec = spec;
  rep.master_seed = cfg.master_seed;
  for (auto t : {TestId::Placebo, TestId::RandomCommonCause, TestId::Subset, TestId::Bootstrap})
    rep.streams.push_back(stream_id(spec, t));

  auto guarded = [&](auto& slot, auto&& run) {
    try {
      slot = run();
    } catch (const Error& e) {
      slot.verdict = Verdict::Error;
      slot.error = std::string(to_string(e.kind())) + ": " + e.what();
      rep.untestable = true;
    }
  };
  guarded(rep.placebo, [&] { return placebo_test(spec, panels, cfg, observed); });
  guarded(rep.rcc, [&] { return random_common_cause_test(spec, panels, cfg, observed); });
  guarded(rep.subset, [&] { return subset_stability_test(spec, panels, cfg, observed); });
  guarded(rep.bootstrap, [&] { return bootstrap_ci_test(spec, panels, cfg, observed); });

  rep.validated = rep.placebo.verdict == Verdict::Pass && rep.rcc.verdict == Verdict::Pass &&
                  rep.subset.verdict == Verdict::Pass && rep.bootstrap.verdict == Verdict::Pass;
  return rep;
}

RefutationReport refute_all(const ModelSpec& spec, const SpecPanels& panels,
                            const RefutationConfig& cfg) {
  return refute_all(spec, panels, cfg, estimator::estimate(spec, panels.signals, panels.returns));
}

}  // namespace refute::refuter
