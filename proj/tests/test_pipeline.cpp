// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "refute/error.hpp"
#include "refute/pipeline.hpp"
#include "refute/synthgen.hpp"
#include "support.hpp"

using namespace refute;
using namespace refute::pipeline;

namespace {

struct World {
  ingest::PriceData prices;
  std::map<std::string, signal::SentimentPanel> panels;
};

World null_world(std::size_t tickers, std::size_t aspects, std::uint64_t seed = 7) {
  auto sc = synthgen::builtin("null");
  sc.tickers.resize(tickers);
  sc.aspects.resize(aspects);
  sc.seed = seed;
  auto g = synthgen::generate(sc);
  return {std::move(g.prices), signal::build_panels(g.sentiment)};
}

RunConfig quick_config() {
  RunConfig c;
  c.lags = {0, 1};
  c.refutation.placebo_iters = 40;
  c.refutation.subset_iters = 20;
  c.refutation.bootstrap_iters = 60;
  c.refutation.master_seed = 99;
  return c;
}

std::string json_of(const GridResult& g) {
  std::ostringstream os;
  write_grid_json(os, g);
  return os.str();
}

std::string matrix_of(const GridResult& g, Scale s = Scale::Raw) {
  std::ostringstream os;
  write_matrix(os, g, s);
  return os.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

std::string attr(const std::string& element, const std::string& name) {
  std::smatch m;
  const std::regex re(" " + name + "=\"([^\"]*)\"");
  return std::regex_search(element, m, re) ? m[1].str() : std::string();
}

std::vector<std::string> elements(const std::string& svg, const std::string& tag,
                                  const std::string& cls) {
  std::vector<std::string> out;
  const std::regex re("<" + tag + " class=\"" + cls + "[^\"]*\"[^>]*>");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back(it->str());
  return out;
}

signal::SentimentPanel activity_panel(const std::string& name, std::int64_t total) {
  signal::SentimentPanel p;
  p.aspect = name;
  p.total_activity = total;
  return p;
}

}  // namespace

TEST_CASE("select_aspects ranks by activity with lexicographic ties") {
  std::map<std::string, signal::SentimentPanel> panels;
  for (auto& [n, a] : std::vector<std::pair<std::string, int>>{{"c", 10}, {"a", 5}, {"b", 1}})
    panels[n] = activity_panel(n, a);
  CHECK(select_aspects(panels, 2, nullptr) == std::vector<std::string>{"c", "a"});

  panels["aa"] = activity_panel("aa", 5);
  CHECK(select_aspects(panels, 2, nullptr) == std::vector<std::string>{"c", "a"});
  CHECK(select_aspects(panels, 3, nullptr) == std::vector<std::string>{"c", "a", "aa"});

  int short_by = -1;
  CHECK(select_aspects(panels, 9, &short_by).size() == 4);
  CHECK(short_by == 5);
  CHECK_THROWS_AS(select_aspects(panels, 0, nullptr), Error);

  RandomStream rng(1, 1);
  std::map<std::string, signal::SentimentPanel> many;
  std::vector<std::pair<std::int64_t, std::string>> oracle;
  for (int i = 0; i < 25; ++i) {
    const std::string n = "asp" + std::to_string(i);
    const auto act = static_cast<std::int64_t>(rng.below(8));  // plenty of ties
    many[n] = activity_panel(n, act);
    oracle.emplace_back(-act, n);
  }
  std::sort(oracle.begin(), oracle.end());
  std::vector<std::string> want;
  for (int i = 0; i < 20; ++i) want.push_back(oracle[static_cast<std::size_t>(i)].second);
  CHECK(select_aspects(many, 20, &short_by) == want);
  CHECK(short_by == 0);
}

TEST_CASE("grid enumerates every spec once in canonical order") {
  const auto w = null_world(2, 3);
  auto cfg = quick_config();
  const auto g = run_grid(cfg, w.prices, w.panels);
  REQUIRE(g.specs.size() == 12);
  std::size_t i = 0;
  for (const auto& t : g.tickers)
    for (const auto& a : g.aspects)
      for (int l : g.lags) {
        CHECK(g.specs[i].spec.ticker == t);
        CHECK(g.specs[i].spec.aspect == a);
        CHECK(g.specs[i].spec.lag == l);
        ++i;
      }
  for (const auto& s : g.specs) {
    CHECK(s.status == Status::Ok);
    CHECK(s.validated() == (s.refutation && s.refutation->validated));
  }
  CHECK(g.aspects.size() == 3);
  CHECK(g.config_hash.size() == 16);
}

TEST_CASE("reports do not depend on worker count or repetition") {
  const auto w = null_world(3, 4, 11);
  auto cfg = quick_config();
  cfg.workers = 1;
  const auto serial = run_grid(cfg, w.prices, w.panels);
  const auto ref_json = json_of(serial);
  const auto ref_matrix = matrix_of(serial);
  CHECK(json_of(run_grid(cfg, w.prices, w.panels)) == ref_json);
  for (int workers : {4, 8}) {
    cfg.workers = workers;
    const auto par = run_grid(cfg, w.prices, w.panels);
    CHECK(par.workers == workers);
    CHECK(json_of(par) == ref_json);
    CHECK(matrix_of(par) == ref_matrix);
  }
  cfg.refutation.master_seed = 100;
  CHECK(json_of(run_grid(cfg, w.prices, w.panels)) != ref_json);
}

TEST_CASE("inactive aspects are reported as skipped") {
  auto w = null_world(1, 2);
  auto& p = w.panels.begin()->second;
  std::fill(p.z.begin(), p.z.end(), 0.0);
  p.active = false;
  p.sd = 0;
  const auto g = run_grid(quick_config(), w.prices, w.panels);
  REQUIRE(g.specs.size() == 4);
  int skipped = 0;
  for (const auto& s : g.specs)
    if (s.spec.aspect == p.aspect) {
      CHECK(s.status == Status::Skipped);
      CHECK_FALSE(s.reason.empty());
      CHECK_FALSE(s.estimate);
      ++skipped;
    }
  CHECK(skipped == 2);
  // Skipped specs stay in grid.json but not in the matrix.
  CHECK(csv_rows(matrix_of(g)).size() == 3);
  const auto back = [&] {
    std::istringstream in(json_of(g));
    return read_grid_json(in);
  }();
  CHECK(back.specs.size() == 4);
}

TEST_CASE("matrix layout") {
  GridResult empty;
  CHECK(matrix_of(empty) == "ticker,aspect,lag,rt1,rt2,rt3,rt4,validated,beta,hac_se,p_value\n");

  const auto w = null_world(2, 3, 5);
  const auto g = run_grid(quick_config(), w.prices, w.panels);
  const auto rows = csv_rows(matrix_of(g));
  REQUIRE(rows.size() == 13);
  bool seen_filtered = false;
  double last_t = 1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 11);
    const bool v = rows[i][7] == "true";
    CHECK((v == (rows[i][3] == "pass" && rows[i][4] == "pass" && rows[i][5] == "pass" &&
                 rows[i][6] == "pass")));
    if (v) CHECK_FALSE(seen_filtered);
    if (!v && !seen_filtered) {
      seen_filtered = true;
      last_t = 1e300;
    }
    const double t = std::abs(std::stod(rows[i][8]) / std::stod(rows[i][9]));
    CHECK(t <= last_t * (1 + 1e-9));
    last_t = t;
  }
}

TEST_CASE("report scale changes magnitudes only") {
  const auto w = null_world(2, 2, 3);
  const auto g = run_grid(quick_config(), w.prices, w.panels);
  const auto raw = csv_rows(matrix_of(g, Scale::Raw));
  const auto bps = csv_rows(matrix_of(g, Scale::Bps));
  REQUIRE(raw.size() == bps.size());
  for (std::size_t i = 1; i < raw.size(); ++i) {
    for (std::size_t c = 0; c < 8; ++c) CHECK(raw[i][c] == bps[i][c]);
    CHECK(std::stod(bps[i][8]) == doctest::Approx(1e4 * std::stod(raw[i][8])).epsilon(1e-9));
    CHECK(std::stod(bps[i][9]) == doctest::Approx(1e4 * std::stod(raw[i][9])).epsilon(1e-9));
    CHECK(raw[i][10] == bps[i][10]);
  }
  CHECK(parse_scale("bps") == Scale::Bps);
  CHECK(parse_scale("raw") == Scale::Raw);
  CHECK_THROWS_AS(parse_scale("pct"), Error);
}

TEST_CASE("effects table carries the month-cumulative effect") {
  const auto w = null_world(2, 2, 9);
  const auto g = run_grid(quick_config(), w.prices, w.panels);
  std::ostringstream os;
  write_effects(os, g, Scale::Bps);
  const auto rows = csv_rows(os.str());
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == std::vector<std::string>{"ticker", "aspect", "lag", "validated", "beta",
                                            "ci_lower", "ci_upper", "monthly"});
  const auto order = ranked(g);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& s = *order[i - 1];
    CHECK(rows[i][0] == s.spec.ticker);
    CHECK(std::stod(rows[i][4]) == doctest::Approx(1e4 * s.estimate->beta).epsilon(1e-9));
    CHECK(std::stod(rows[i][5]) == doctest::Approx(1e4 * s.refutation->bootstrap.lower).epsilon(1e-9));
    CHECK(std::stod(rows[i][7]) == doctest::Approx(20 * std::stod(rows[i][4])).epsilon(1e-9));
  }
}

TEST_CASE("grid.json round-trips") {
  const auto w = null_world(2, 2, 8);
  auto g = run_grid(quick_config(), w.prices, w.panels);
  g.warnings.push_back("a \"quoted\" warning");
  const auto text = json_of(g);
  std::istringstream in(text);
  const auto back = read_grid_json(in);
  CHECK(json_of(back) == text);
  CHECK(back.config_hash == g.config_hash);
  CHECK(matrix_of(back, Scale::Bps) == matrix_of(g, Scale::Bps));
  // Timings never enter the deterministic report.
  CHECK(text.find("seconds") == std::string::npos);
  std::istringstream bad("{\"format\": \"something-else\"}");
  CHECK_THROWS_AS(read_grid_json(bad), Error);
}

TEST_CASE("exact linear relation has |r| = 1 and validates") {
  RandomStream rng(2, 2);
  auto z = signal::z_normalize(testing::normals(rng, 92));
  auto a = signal::z_normalize(testing::normals(rng, 92));
  std::vector<double> r(92, 0.0);
  for (std::size_t t = 1; t < 92; ++t) r[t] = 0.01 * z[t - 1];
  const auto sig = testing::signal_panel(z, a);
  const auto ret = testing::panel_from_returns(r);
  refuter::RefutationConfig rc;
  rc.master_seed = 1;
  const auto s = run_spec(estimator::ModelSpec{"T", "a", 1, {false, false}}, sig, ret, rc);
  CHECK(s.status == Status::Ok);
  CHECK(s.validated());
  CHECK(std::abs(s.pearson_r) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("independent series give |r| near zero at large T") {
  RandomStream rng(3, 3);
  const std::size_t T = 5000;
  int inside = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = testing::normals(rng, T);
    const auto y = testing::normals(rng, T);
    inside += std::abs(pearson(x, y)) < 3.0 / std::sqrt(static_cast<double>(T));
  }
  CHECK(inside >= 97);
  CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}) == doctest::Approx(1));
  CHECK(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{2, 4, 6}) == 0.0);
}

TEST_CASE("compare_correlation flags refuted high-|r| specs") {
  const auto w = null_world(2, 3, 4);
  const auto g = run_grid(quick_config(), w.prices, w.panels);
  const auto rows = compare_correlation(g, 0.1);
  const auto again = compare_correlation(g, w.prices, w.panels, 0.1);
  REQUIRE(rows.size() == again.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].flagged == (rows[i].abs_r >= 0.1 && !rows[i].validated));
    CHECK(rows[i].abs_r == doctest::Approx(again[i].abs_r).epsilon(1e-12));
    CHECK(rows[i].abs_beta == std::abs(g.specs[i].estimate->beta));
  }
}

TEST_CASE("Benjamini-Hochberg adjustment") {
  RandomStream rng(4, 4);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> p(1 + rng.below(40));
    for (auto& v : p) v = rng.uniform();
    if (p.size() > 3) p[1] = p[2];
    const auto q = bh_adjust(p);
    const double m = static_cast<double>(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      // q_i = min over p_j >= p_i of m p_j / rank_j, capped at 1.
      double want = 1.0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] < p[i]) continue;
        double rank = 0;
        for (double v : p) rank += v <= p[j];
        want = std::min(want, m * p[j] / rank);
      }
      CHECK(q[i] == doctest::Approx(want).epsilon(1e-12));
    }
  }
  SUBCASE("all ones stay one") {
    CHECK(bh_adjust({1.0, 1.0}) == std::vector<double>{1.0, 1.0});
  }
}

TEST_CASE("config documents parse and reject bad input") {
  const auto c = parse_config(R"({
    "lags": [0, 2], "tickers": ["BP"], "top_aspects": 5,
    "controls": {"lagged_return": false},
    "refutation": {"placebo_iters": 10, "ci_level": 90, "seed": 4},
    "scale": "bps", "workers": 3, "fill_policy": "drop"
  })");
  CHECK(c.lags == std::vector<int>{0, 2});
  CHECK(c.tickers == std::vector<std::string>{"BP"});
  CHECK(c.top_aspects == 5);
  CHECK_FALSE(c.controls.lagged_return);
  CHECK(c.controls.activity);
  CHECK(c.refutation.placebo_iters == 10);
  CHECK(c.refutation.ci_level == 90);
  CHECK(c.refutation.master_seed == 4);
  CHECK(c.scale == Scale::Bps);
  CHECK(c.workers == 3);
  CHECK(c.fill_policy == ingest::FillPolicy::Drop);

  const auto back = parse_config(canonical_config(c));
  CHECK(config_hash(back) == config_hash(c));
  auto other = c;
  other.workers = 1;
  CHECK(config_hash(other) == config_hash(c));
  other.refutation.bootstrap_iters = 7;
  CHECK(config_hash(other) != config_hash(c));

  for (const char* bad : {R"({"lagz": [0]})", R"({"lags": [-1]})", R"({"lags": []})",
                          R"({"lags": "0"})", R"({"refutation": {"subset_fraction": 1.5}})",
                          R"({"scale": "pct"})", R"({"refutation": {"bogus": 1}})", "[1, 2",
                          R"({"top_aspects": 0})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_config(bad), Error);
  }
}

TEST_CASE("unknown tickers and aspects are config errors") {
  const auto w = null_world(1, 2);
  auto cfg = quick_config();
  cfg.tickers = {"NOPE"};
  CHECK_THROWS_AS(run_grid(cfg, w.prices, w.panels), Error);
  cfg.tickers.clear();
  cfg.aspects = {"nope"};
  CHECK_THROWS_AS(run_grid(cfg, w.prices, w.panels), Error);
  cfg.aspects.clear();
  cfg.top_aspects = 5;
  const auto g = run_grid(cfg, w.prices, w.panels);
  CHECK(g.aspects.size() == 2);
  CHECK(g.warnings.size() == 1);
}

TEST_CASE("CI plot whiskers sit at the reported interval") {
  const auto w = null_world(1, 1, 12);
  auto cfg = quick_config();
  cfg.lags = {1};
  const auto g = run_grid(cfg, w.prices, w.panels);
  REQUIRE(g.specs.size() == 1);
  const auto& b = g.specs[0].refutation->bootstrap;
  for (Scale sc : {Scale::Raw, Scale::Bps}) {
    std::ostringstream os;
    write_ci_plot(os, g, 15, sc);
    const auto svg = os.str();
    const auto at = svg.find("<svg");
    const auto root = svg.substr(at, svg.find('>', at) - at);
    const double xmin = std::stod(attr(root, "data-xmin")), xmax = std::stod(attr(root, "data-xmax"));
    const double px0 = std::stod(attr(root, "data-px0")), px1 = std::stod(attr(root, "data-px1"));
    const auto whiskers = elements(svg, "line", "whisker");
    REQUIRE(whiskers.size() == 1);
    const double k = scale_factor(sc);
    CHECK(std::stod(attr(whiskers[0], "data-lower")) == doctest::Approx(b.lower * k));
    CHECK(std::stod(attr(whiskers[0], "data-upper")) == doctest::Approx(b.upper * k));
    auto px = [&](double v) { return px0 + (v - xmin) / (xmax - xmin) * (px1 - px0); };
    CHECK(std::abs(std::stod(attr(whiskers[0], "x1")) - px(b.lower * k)) < 1e-3);
    CHECK(std::abs(std::stod(attr(whiskers[0], "x2")) - px(b.upper * k)) < 1e-3);
    const auto zero = elements(svg, "line", "zero");
    REQUIRE(zero.size() == 1);
    CHECK(std::abs(std::stod(attr(zero[0], "x1")) - px(0.0)) < 1e-3);
  }
}

TEST_CASE("heatmap and lag profile highlight only validated specs") {
  const auto w = null_world(1, 2, 13);
  auto cfg = quick_config();
  cfg.lags = {0, 1, 2, 3};
  auto g = run_grid(cfg, w.prices, w.panels);
  for (auto& s : g.specs) s.refutation->validated = false;
  {
    std::ostringstream os;
    write_heatmap(os, g, Scale::Bps);
    const auto cells = elements(os.str(), "rect", "cell");
    CHECK(cells.size() == 8);
    for (const auto& c : cells) {
      CHECK(attr(c, "fill") == "#d9d9d9");
      CHECK(attr(c, "class") == "cell filtered");
    }
  }
  const auto& aspect = g.aspects[0];
  for (auto& s : g.specs) s.refutation->validated = s.spec.aspect == aspect && s.spec.lag == 2;
  {
    std::ostringstream os;
    write_lag_profile(os, g, g.tickers[0], aspect, Scale::Bps);
    const auto markers = elements(os.str(), "circle", "marker");
    REQUIRE(markers.size() == 4);
    for (const auto& m : markers) {
      const bool lag2 = attr(m, "data-lag") == "2";
      CHECK(attr(m, "class") == (lag2 ? "marker validated" : "marker filtered"));
    }
  }
  {
    std::ostringstream os;
    write_heatmap(os, g, Scale::Bps);
    int coloured = 0;
    for (const auto& c : elements(os.str(), "rect", "cell"))
      coloured += attr(c, "fill") != "#d9d9d9";
    CHECK(coloured == 1);
  }
}

TEST_CASE("emit_all writes the output set") {
  const auto w = null_world(1, 2, 14);
  const auto g = run_grid(quick_config(), w.prices, w.panels);
  const auto dir = std::filesystem::temp_directory_path() / "refute_pipeline_emit";
  std::filesystem::remove_all(dir);
  emit_all(g, dir, Scale::Bps, 15, 0.4);
  for (const char* f : {"matrix.csv", "effects.csv", "grid.json", "comparison.csv", "timings.json",
                        "plots/bootstrap_ci.svg", "plots/heatmap.svg", "plots/deflation.svg"})
    CHECK(std::filesystem::exists(dir / f));
  std::filesystem::remove_all(dir);
}
