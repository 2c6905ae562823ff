// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "refute/error.hpp"
#include "refute/pipeline.hpp"

namespace refute::pipeline {

using nlohmann::json;
using refuter::Verdict;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// JSON has no inf/nan, so those travel as strings.
json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

double from_jnum(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Verdict parse_verdict(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  return Verdict::Error;
}

Status parse_status(const std::string& s) {
  if (s == "ok") return Status::Ok;
  if (s == "untestable") return Status::Untestable;
  return Status::Skipped;
}

json spec_json(const SpecResult& s) {
  json j = {{"ticker", s.spec.ticker},
            {"aspect", s.spec.aspect},
            {"lag", s.spec.lag},
            {"controls",
             {{"lagged_return", s.spec.controls.lagged_return},
              {"activity", s.spec.controls.activity}}},
            {"status", to_string(s.status)},
            {"reason", s.reason},
            {"pearson_r", jnum(s.pearson_r)},
            {"q_value", jnum(s.q_value)}};
  if (s.estimate) {
    const auto& e = *s.estimate;
    json controls = json::array();
    for (std::size_t i = 0; i < e.control_names.size(); ++i)
      controls.push_back({{"name", e.control_names[i]}, {"gamma", jnum(e.gamma[i])}});
    j["estimate"] = {{"beta", jnum(e.beta)},       {"hac_se", jnum(e.hac_se)},
                     {"t_stat", jnum(e.t_stat)},   {"p_value", jnum(e.p_value)},
                     {"alpha", jnum(e.alpha)},     {"controls", controls},
                     {"n_obs", e.n_obs},           {"n_params", e.n_params},
                     {"hac_lag", e.hac_lag}};
  } else {
    j["estimate"] = nullptr;
  }
  if (s.refutation) {
    const auto& r = *s.refutation;
    json streams = json::array();
    for (auto id : r.streams) streams.push_back(hex(id));
    json betas = json::array();
    for (double b : r.rcc.betas) betas.push_back(jnum(b));
    j["refutation"] = {
        {"validated", r.validated},
        {"untestable", r.untestable},
        {"streams", streams},
        {"placebo",
         {{"verdict", refuter::to_string(r.placebo.verdict)},
          {"observed_abs", jnum(r.placebo.observed_abs)},
          {"q95", jnum(r.placebo.q95)},
          {"null_mean", jnum(r.placebo.null_mean)},
          {"null_sd", jnum(r.placebo.null_sd)},
          {"null_median", jnum(r.placebo.null_median)},
          {"null_max", jnum(r.placebo.null_max)},
          {"n_valid", r.placebo.n_valid},
          {"n_dropped", r.placebo.n_dropped},
          {"error", r.placebo.error}}},
        {"rcc",
         {{"verdict", refuter::to_string(r.rcc.verdict)},
          {"beta_rcc", jnum(r.rcc.beta_rcc)},
          {"betas", betas},
          {"error", r.rcc.error}}},
        {"subset",
         {{"verdict", refuter::to_string(r.subset.verdict)},
          {"p_hat", jnum(r.subset.p_hat)},
          {"modal_sign", r.subset.modal_sign},
          {"n_positive", r.subset.n_positive},
          {"n_negative", r.subset.n_negative},
          {"n_zero", r.subset.n_zero},
          {"subsample_size", r.subset.subsample_size},
          {"n_dropped", r.subset.n_dropped},
          {"error", r.subset.error}}},
        {"bootstrap",
         {{"verdict", refuter::to_string(r.bootstrap.verdict)},
          {"lower", jnum(r.bootstrap.lower)},
          {"upper", jnum(r.bootstrap.upper)},
          {"mean", jnum(r.bootstrap.mean)},
          {"sd", jnum(r.bootstrap.sd)},
          {"n_valid", r.bootstrap.n_valid},
          {"n_dropped", r.bootstrap.n_dropped},
          {"error", r.bootstrap.error}}},
    };
  } else {
    j["refutation"] = nullptr;
  }
  return j;
}

SpecResult spec_from_json(const json& j, std::uint64_t seed) {
  SpecResult s;
  s.spec.ticker = j.at("ticker").get<std::string>();
  s.spec.aspect = j.at("aspect").get<std::string>();
  s.spec.lag = j.at("lag").get<int>();
  s.spec.controls.lagged_return = j.at("controls").at("lagged_return").get<bool>();
  s.spec.controls.activity = j.at("controls").at("activity").get<bool>();
  s.status = parse_status(j.at("status").get<std::string>());
  s.reason = j.at("reason").get<std::string>();
  s.pearson_r = from_jnum(j.at("pearson_r"));
  s.q_value = from_jnum(j.at("q_value"));
  if (const auto& e = j.at("estimate"); !e.is_null()) {
    estimator::EstimationResult r;
    r.spec = s.spec;
    r.beta = from_jnum(e.at("beta"));
    r.hac_se = from_jnum(e.at("hac_se"));
    r.t_stat = from_jnum(e.at("t_stat"));
    r.p_value = from_jnum(e.at("p_value"));
    r.alpha = from_jnum(e.at("alpha"));
    for (const auto& c : e.at("controls")) {
      r.control_names.push_back(c.at("name").get<std::string>());
      r.gamma.push_back(from_jnum(c.at("gamma")));
    }
    r.n_obs = e.at("n_obs").get<std::size_t>();
    r.n_params = e.at("n_params").get<std::size_t>();
    r.hac_lag = e.at("hac_lag").get<int>();
    s.estimate = std::move(r);
  }
  if (const auto& r = j.at("refutation"); !r.is_null()) {
    refuter::RefutationReport rep;
    rep.spec = s.spec;
    rep.master_seed = seed;
    rep.validated = r.at("validated").get<bool>();
    rep.untestable = r.at("untestable").get<bool>();
    for (const auto& h : r.at("streams"))
      rep.streams.push_back(std::stoull(h.get<std::string>(), nullptr, 16));
    const auto& p = r.at("placebo");
    rep.placebo.verdict = parse_verdict(p.at("verdict").get<std::string>());
    rep.placebo.observed_abs = from_jnum(p.at("observed_abs"));
    rep.placebo.q95 = from_jnum(p.at("q95"));
    rep.placebo.null_mean = from_jnum(p.at("null_mean"));
    rep.placebo.null_sd = from_jnum(p.at("null_sd"));
    rep.placebo.null_median = from_jnum(p.at("null_median"));
    rep.placebo.null_max = from_jnum(p.at("null_max"));
    rep.placebo.n_valid = p.at("n_valid").get<int>();
    rep.placebo.n_dropped = p.at("n_dropped").get<int>();
    rep.placebo.error = p.at("error").get<std::string>();
    const auto& c = r.at("rcc");
    rep.rcc.verdict = parse_verdict(c.at("verdict").get<std::string>());
    rep.rcc.beta_rcc = from_jnum(c.at("beta_rcc"));
    for (const auto& b : c.at("betas")) rep.rcc.betas.push_back(from_jnum(b));
    rep.rcc.error = c.at("error").get<std::string>();
    const auto& u = r.at("subset");
    rep.subset.verdict = parse_verdict(u.at("verdict").get<std::string>());
    rep.subset.p_hat = from_jnum(u.at("p_hat"));
    rep.subset.modal_sign = u.at("modal_sign").get<int>();
    rep.subset.n_positive = u.at("n_positive").get<int>();
    rep.subset.n_negative = u.at("n_negative").get<int>();
    rep.subset.n_zero = u.at("n_zero").get<int>();
    rep.subset.subsample_size = u.at("subsample_size").get<int>();
    rep.subset.n_dropped = u.at("n_dropped").get<int>();
    rep.subset.error = u.at("error").get<std::string>();
    const auto& b = r.at("bootstrap");
    rep.bootstrap.verdict = parse_verdict(b.at("verdict").get<std::string>());
    rep.bootstrap.lower = from_jnum(b.at("lower"));
    rep.bootstrap.upper = from_jnum(b.at("upper"));
    rep.bootstrap.mean = from_jnum(b.at("mean"));
    rep.bootstrap.sd = from_jnum(b.at("sd"));
    rep.bootstrap.n_valid = b.at("n_valid").get<int>();
    rep.bootstrap.n_dropped = b.at("n_dropped").get<int>();
    rep.bootstrap.error = b.at("error").get<std::string>();
    s.refutation = std::move(rep);
  }
  return s;
}

std::string sanitize(std::string_view name) {
  std::string out(name);
  for (auto& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-') c = '_';
  return out;
}

template <class Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path.string());
  fn(out);
  out.flush();
  if (!out) throw io_error("write failed for " + path.string());
}

}  // namespace

void write_matrix(std::ostream& out, const GridResult& result, Scale scale) {
  const double f = scale_factor(scale);
  out << "ticker,aspect,lag,rt1,rt2,rt3,rt4,validated,beta,hac_se,p_value\n";
  for (const SpecResult* s : ranked(result)) {
    const auto& e = *s->estimate;
    out << s->spec.ticker << ',' << s->spec.aspect << ',' << s->spec.lag;
    if (s->refutation) {
      const auto& r = *s->refutation;
      for (Verdict v : {r.placebo.verdict, r.rcc.verdict, r.subset.verdict, r.bootstrap.verdict})
        out << ',' << refuter::to_string(v);
    } else {
      out << ",error,error,error,error";
    }
    out << ',' << (s->validated() ? "true" : "false") << ',' << num(e.beta * f) << ','
        << num(e.hac_se * f) << ',' << num(e.p_value) << '\n';
  }
}

void write_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows, Scale scale) {
  const double f = scale_factor(scale);
  out << "ticker,aspect,lag,abs_r,abs_beta,validated,flagged\n";
  for (const auto& r : rows)
    out << r.spec.ticker << ',' << r.spec.aspect << ',' << r.spec.lag << ',' << num(r.abs_r)
        << ',' << num(r.abs_beta * f) << ',' << (r.validated ? "true" : "false") << ','
        << (r.flagged ? "true" : "false") << '\n';
}

void write_effects(std::ostream& out, const GridResult& result, Scale scale) {
  const double f = scale_factor(scale);
  out << "ticker,aspect,lag,validated,beta,ci_lower,ci_upper,monthly\n";
  for (const SpecResult* s : ranked(result)) {
    const auto& e = *s->estimate;
    out << s->spec.ticker << ',' << s->spec.aspect << ',' << s->spec.lag << ','
        << (s->validated() ? "true" : "false") << ',' << num(e.beta * f) << ',';
    if (s->refutation && s->refutation->bootstrap.n_valid > 0)
      out << num(s->refutation->bootstrap.lower * f) << ',' << num(s->refutation->bootstrap.upper * f);
    else
      out << ',';
    out << ',' << num(kTradingMonth * e.beta * f) << '\n';
  }
}

void write_grid_json(std::ostream& out, const GridResult& result) {
  json specs = json::array();
  for (const auto& s : result.specs) specs.push_back(spec_json(s));
  json j = {{"format", "refute-absa/grid"},
            {"version", 1},
            {"master_seed", result.master_seed},
            {"config_hash", result.config_hash},
            {"config", result.config.empty() ? json::object() : json::parse(result.config)},
            {"tickers", result.tickers},
            {"aspects", result.aspects},
            {"lags", result.lags},
            {"warnings", result.warnings},
            {"specs", specs}};
  out << j.dump(1) << '\n';
}

GridResult read_grid_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("grid.json: ") + e.what());
  }
  try {
    if (j.value("format", "") != "refute-absa/grid")
      throw Error(ErrorKind::Parse, "grid.json: not a grid result document");
    GridResult g;
    g.master_seed = j.at("master_seed").get<std::uint64_t>();
    g.config_hash = j.at("config_hash").get<std::string>();
    g.config = j.at("config").dump();
    g.tickers = j.at("tickers").get<std::vector<std::string>>();
    g.aspects = j.at("aspects").get<std::vector<std::string>>();
    g.lags = j.at("lags").get<std::vector<int>>();
    g.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& s : j.at("specs")) g.specs.push_back(spec_from_json(s, g.master_seed));
    return g;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("grid.json: ") + e.what());
  }
}

void write_timings(std::ostream& out, const GridResult& result) {
  json specs = json::array();
  for (std::size_t i = 0; i < result.specs.size() && i < result.spec_seconds.size(); ++i)
    specs.push_back({{"spec", result.specs[i].spec.label()}, {"seconds", result.spec_seconds[i]}});
  json j = {{"elapsed_seconds", result.elapsed_seconds},
            {"workers", result.workers},
            {"specs", specs}};
  out << j.dump(1) << '\n';
}

void emit_all(const GridResult& result, const std::filesystem::path& dir, Scale scale,
              int plot_top_k, double correlation_threshold) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "plots", ec);
  if (ec) throw io_error("cannot create " + (dir / "plots").string() + ": " + ec.message());
  const auto rows = compare_correlation(result, correlation_threshold);
  write_file(dir / "matrix.csv", [&](std::ostream& o) { write_matrix(o, result, scale); });
  write_file(dir / "effects.csv", [&](std::ostream& o) { write_effects(o, result, scale); });
  write_file(dir / "grid.json", [&](std::ostream& o) { write_grid_json(o, result); });
  write_file(dir / "comparison.csv", [&](std::ostream& o) { write_comparison(o, rows, scale); });
  if (!result.spec_seconds.empty())
    write_file(dir / "timings.json", [&](std::ostream& o) { write_timings(o, result); });
  const auto plots = dir / "plots";
  write_file(plots / "bootstrap_ci.svg",
             [&](std::ostream& o) { write_ci_plot(o, result, plot_top_k, scale); });
  write_file(plots / "heatmap.svg", [&](std::ostream& o) { write_heatmap(o, result, scale); });
  write_file(plots / "deflation.svg",
             [&](std::ostream& o) { write_deflation_plot(o, rows, scale); });
  for (const auto& t : result.tickers)
    for (const auto& a : result.aspects) {
      const bool any = std::any_of(result.specs.begin(), result.specs.end(), [&](const auto& s) {
        return s.estimate && s.spec.ticker == t && s.spec.aspect == a;
      });
      if (!any) continue;
      write_file(plots / ("lag_profile_" + sanitize(t) + "_" + sanitize(a) + ".svg"),
                 [&](std::ostream& o) { write_lag_profile(o, result, t, a, scale); });
    }
}

}  // namespace refute::pipeline
