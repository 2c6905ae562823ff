// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "refute/error.hpp"
#include "refute/pipeline.hpp"
#include "refute/rng.hpp"

namespace refute::pipeline {

using nlohmann::json;

Scale parse_scale(std::string_view name) {
  if (name == "raw") return Scale::Raw;
  if (name == "bps") return Scale::Bps;
  throw config_error("unknown scale '" + std::string(name) + "' (expected raw or bps)");
}

std::string_view to_string(Scale s) noexcept { return s == Scale::Bps ? "bps" : "raw"; }

double scale_factor(Scale s) noexcept { return s == Scale::Bps ? 1e4 : 1.0; }

void RunConfig::validate() const {
  if (lags.empty()) throw config_error("lag grid is empty");
  std::set<int> seen;
  for (int l : lags) {
    if (l < 0) throw config_error("negative lag " + std::to_string(l));
    if (!seen.insert(l).second) throw config_error("duplicate lag " + std::to_string(l));
  }
  if (top_aspects < 1) throw config_error("top_aspects must be >= 1");
  if (workers < 0) throw config_error("workers must be >= 0");
  if (plot_top_k < 1) throw config_error("plot_top_k must be >= 1");
  if (!(correlation_threshold >= 0.0 && correlation_threshold <= 1.0))
    throw config_error("correlation_threshold must lie in [0, 1]");
  for (const auto* list : {&tickers, &aspects}) {
    std::set<std::string> names(list->begin(), list->end());
    if (names.size() != list->size()) throw config_error("duplicate ticker or aspect name");
  }
  refutation.validate();
}

namespace {

template <class T>
T take(const json& j, std::string_view source, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw config_error(std::string(source) + ": bad value for '" + key + "'");
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    std::string_view source, std::string_view where) {
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* n) { return k == n; }))
      throw config_error(std::string(source) + ": unknown key '" + std::string(where) + k + "'");
  }
}

void apply_refutation(const json& j, refuter::RefutationConfig& r, std::string_view src) {
  if (!j.is_object()) throw config_error(std::string(src) + ": 'refutation' must be an object");
  reject_unknown(j,
                 {"placebo_iters", "rcc_confounders", "rcc_repeats", "subset_fraction",
                  "subset_iters", "subset_threshold", "bootstrap_iters", "ci_level",
                  "block_bootstrap", "max_drop_fraction", "seed"},
                 src, "refutation.");
  for (const auto& [k, v] : j.items()) {
    if (k == "placebo_iters") r.placebo_iters = take<int>(v, src, "placebo_iters");
    else if (k == "rcc_confounders") r.rcc_confounders = take<int>(v, src, "rcc_confounders");
    else if (k == "rcc_repeats") r.rcc_repeats = take<int>(v, src, "rcc_repeats");
    else if (k == "subset_fraction") r.subset_fraction = take<double>(v, src, "subset_fraction");
    else if (k == "subset_iters") r.subset_iters = take<int>(v, src, "subset_iters");
    else if (k == "subset_threshold") r.subset_threshold = take<double>(v, src, "subset_threshold");
    else if (k == "bootstrap_iters") r.bootstrap_iters = take<int>(v, src, "bootstrap_iters");
    else if (k == "ci_level") r.ci_level = take<double>(v, src, "ci_level");
    else if (k == "block_bootstrap") r.block_bootstrap = take<bool>(v, src, "block_bootstrap");
    else if (k == "max_drop_fraction") r.max_drop_fraction = take<double>(v, src, "max_drop_fraction");
    else if (k == "seed") r.master_seed = take<std::uint64_t>(v, src, "seed");
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string(source) + ": " + e.what());
  }
  if (!j.is_object()) throw config_error(std::string(source) + ": top level must be an object");
  reject_unknown(j,
                 {"lags", "tickers", "aspects", "top_aspects", "controls", "refutation", "seed",
                  "scale", "workers", "fill_policy", "correlation_threshold", "plot_top_k",
                  "output_dir"},
                 source, "");
  RunConfig cfg;
  for (const auto& [k, v] : j.items()) {
    if (k == "lags") cfg.lags = take<std::vector<int>>(v, source, "lags");
    else if (k == "tickers") cfg.tickers = take<std::vector<std::string>>(v, source, "tickers");
    else if (k == "aspects") cfg.aspects = take<std::vector<std::string>>(v, source, "aspects");
    else if (k == "top_aspects") cfg.top_aspects = take<int>(v, source, "top_aspects");
    else if (k == "controls") {
      if (!v.is_object()) throw config_error(std::string(source) + ": 'controls' must be an object");
      reject_unknown(v, {"lagged_return", "activity"}, source, "controls.");
      if (v.contains("lagged_return"))
        cfg.controls.lagged_return = take<bool>(v["lagged_return"], source, "lagged_return");
      if (v.contains("activity"))
        cfg.controls.activity = take<bool>(v["activity"], source, "activity");
    } else if (k == "refutation") apply_refutation(v, cfg.refutation, source);
    else if (k == "scale") cfg.scale = parse_scale(take<std::string>(v, source, "scale"));
    else if (k == "workers") cfg.workers = take<int>(v, source, "workers");
    else if (k == "fill_policy")
      cfg.fill_policy = ingest::parse_fill_policy(take<std::string>(v, source, "fill_policy"));
    else if (k == "correlation_threshold")
      cfg.correlation_threshold = take<double>(v, source, "correlation_threshold");
    else if (k == "plot_top_k") cfg.plot_top_k = take<int>(v, source, "plot_top_k");
    else if (k == "output_dir") cfg.out_dir = take<std::string>(v, source, "output_dir");
  }
  // A top-level seed is shorthand for refutation.seed and wins over it.
  if (j.contains("seed")) cfg.refutation.master_seed = take<std::uint64_t>(j["seed"], source, "seed");
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string canonical_config(const RunConfig& cfg) {
  const auto& r = cfg.refutation;
  json j = {
      {"lags", cfg.lags},
      {"tickers", cfg.tickers},
      {"aspects", cfg.aspects},
      {"top_aspects", cfg.top_aspects},
      {"controls", {{"lagged_return", cfg.controls.lagged_return}, {"activity", cfg.controls.activity}}},
      {"refutation",
       {{"placebo_iters", r.placebo_iters},
        {"rcc_confounders", r.rcc_confounders},
        {"rcc_repeats", r.rcc_repeats},
        {"subset_fraction", r.subset_fraction},
        {"subset_iters", r.subset_iters},
        {"subset_threshold", r.subset_threshold},
        {"bootstrap_iters", r.bootstrap_iters},
        {"ci_level", r.ci_level},
        {"block_bootstrap", r.block_bootstrap},
        {"max_drop_fraction", r.max_drop_fraction},
        {"seed", r.master_seed}}},
      {"scale", to_string(cfg.scale)},
      {"fill_policy", ingest::to_string(cfg.fill_policy)},
      {"correlation_threshold", cfg.correlation_threshold},
      {"plot_top_k", cfg.plot_top_k},
  };
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash64(canonical_config(cfg))));
  return buf;
}

}  // namespace refute::pipeline
