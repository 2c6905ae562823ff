// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "refute/error.hpp"
#include "refute/ingest.hpp"
#include "refute/kernels/kernels.hpp"
#include "refute/pipeline.hpp"
#include "refute/signal.hpp"
#include "refute/synthgen.hpp"

namespace fs = std::filesystem;
using namespace refute;

namespace {

struct RunArgs {
  std::string prices, sentiment, config, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string scale, fill_policy;
  bool dump_signals = false;
};

void summarize(const pipeline::GridResult& g) {
  std::size_t ok = 0, skipped = 0, untestable = 0, validated = 0;
  for (const auto& s : g.specs) {
    if (s.status == pipeline::Status::Ok) ++ok;
    if (s.status == pipeline::Status::Skipped) ++skipped;
    if (s.status == pipeline::Status::Untestable) ++untestable;
    if (s.validated()) ++validated;
  }
  std::printf("%zu specs: %zu refuted, %zu untestable, %zu skipped; %zu validated\n",
              g.specs.size(), ok, untestable, skipped, validated);
}

int run(const RunArgs& a) {
  auto cfg = a.config.empty() ? pipeline::RunConfig{} : pipeline::load_config(a.config);
  if (a.seed) cfg.refutation.master_seed = *a.seed;
  if (a.workers) cfg.workers = *a.workers;
  if (!a.scale.empty()) cfg.scale = pipeline::parse_scale(a.scale);
  if (!a.fill_policy.empty()) cfg.fill_policy = ingest::parse_fill_policy(a.fill_policy);
  cfg.out_dir = a.out;
  cfg.validate();

  const auto prices = ingest::load_prices(a.prices);
  const auto raw = ingest::load_sentiment(a.sentiment, prices.calendar, cfg.fill_policy);
  const auto panels = signal::build_panels(raw);
  fs::create_directories(cfg.out_dir);
  if (a.dump_signals) {
    std::ofstream out(cfg.out_dir / "signals.csv", std::ios::binary);
    if (!out) throw io_error("cannot write signals.csv");
    signal::write_signals(out, prices.calendar, panels);
  }
  const auto grid = pipeline::run_grid(cfg, prices, panels);
  for (const auto& w : grid.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  pipeline::emit_all(grid, cfg.out_dir, cfg.scale, cfg.plot_top_k, cfg.correlation_threshold);
  summarize(grid);
  std::printf("%d workers, %s kernels, %.2f s; results in %s\n", grid.workers,
              kernels::active_backend() == kernels::Backend::Avx2 ? "avx2" : "scalar",
              grid.elapsed_seconds, cfg.out_dir.string().c_str());
  return 0;
}

int synth(const std::string& scenario, const std::string& out, std::optional<std::uint64_t> seed) {
  auto sc = synthgen::resolve_scenario(scenario);
  if (seed) sc.seed = *seed;
  const auto g = synthgen::generate(sc);
  synthgen::write_outputs(sc, g, out);
  std::printf("wrote %zu days x %zu tickers x %zu aspects to %s\n", g.prices.calendar.size(),
              g.prices.panels.size(), g.sentiment.size(), out.c_str());
  return 0;
}

int report(const std::string& in_dir, const std::string& out_dir, const std::string& scale) {
  std::ifstream in(fs::path(in_dir) / "grid.json");
  if (!in) throw io_error("cannot open " + (fs::path(in_dir) / "grid.json").string());
  const auto grid = pipeline::read_grid_json(in);
  const auto cfg = nlohmann::json::parse(grid.config);
  const auto s = pipeline::parse_scale(scale.empty() ? cfg.value("scale", std::string("raw")) : scale);
  pipeline::emit_all(grid, out_dir.empty() ? in_dir : out_dir, s, cfg.value("plot_top_k", 15),
                     cfg.value("correlation_threshold", 0.4));
  summarize(grid);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Refutation-tested sentiment/return associations"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Estimate and refute the ticker x aspect x lag grid");
  run_cmd->add_option("--prices", ra.prices, "Price CSV (date,ticker,adj_close)")->required();
  run_cmd->add_option("--sentiment", ra.sentiment, "Sentiment CSV (date,aspect,pos,neg,neu)")->required();
  run_cmd->add_option("--config", ra.config, "JSON run configuration");
  run_cmd->add_option("--out", ra.out, "Output directory")->required();
  run_cmd->add_option("--seed", ra.seed, "Master seed");
  run_cmd->add_option("--workers", ra.workers, "Worker threads (0 = all cores)");
  run_cmd->add_option("--scale", ra.scale, "Reported units")->check(CLI::IsMember({"raw", "bps"}));
  run_cmd->add_option("--fill-policy", ra.fill_policy, "Off-calendar sentiment rows")
      ->check(CLI::IsMember({"fold", "drop", "zero"}));
  run_cmd->add_flag("--dump-signals", ra.dump_signals, "Also write signals.csv");

  std::string scenario, synth_out;
  std::optional<std::uint64_t> synth_seed;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic panel with known truth");
  synth_cmd->add_option("--scenario", scenario, "Scenario JSON or builtin:NAME")->required();
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth_seed, "Seed (overrides the scenario)");

  std::string report_in, report_out, report_scale;
  auto* report_cmd = app.add_subcommand("report", "Re-emit tables and plots from grid.json");
  report_cmd->add_option("--in", report_in, "Directory holding grid.json")->required();
  report_cmd->add_option("--out", report_out, "Output directory (default: --in)");
  report_cmd->add_option("--scale", report_scale, "Reported units")->check(CLI::IsMember({"raw", "bps"}));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return run(ra);
    if (*synth_cmd) return synth(scenario, synth_out, synth_seed);
    if (*report_cmd) return report(report_in, report_out, report_scale);
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", std::string(to_string(e.kind())).c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
