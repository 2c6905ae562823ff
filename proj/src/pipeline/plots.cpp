// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "refute/pipeline.hpp"

namespace refute::pipeline {

namespace {

constexpr const char* kValidated = "#1f4e9c";
constexpr const char* kFiltered = "#9a9a9a";
constexpr const char* kGrey = "#d9d9d9";

std::string f(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string esc(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void open_svg(std::ostream& out, double w, double h, const std::string& extra = "") {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f(w) << "\" height=\"" << f(h)
      << "\" viewBox=\"0 0 " << f(w) << ' ' << f(h) << "\" font-family=\"sans-serif\""
      << " font-size=\"11\"" << extra << ">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void title(std::ostream& out, double x, double y, std::string_view text) {
  out << "<text x=\"" << f(x) << "\" y=\"" << f(y) << "\" font-size=\"13\" font-weight=\"bold\">"
      << esc(text) << "</text>\n";
}

struct Axis {
  double lo, hi, px0, px1;
  double operator()(double v) const { return px0 + (v - lo) / (hi - lo) * (px1 - px0); }
};

Axis padded(double lo, double hi, double px0, double px1) {
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.08 * (hi - lo);
  return {lo - pad, hi + pad, px0, px1};
}

std::string unit_label(Scale s) { return s == Scale::Bps ? "bps per s.d." : "return per s.d."; }

}  // namespace

void write_ci_plot(std::ostream& out, const GridResult& result, int top_k, Scale scale) {
  const double k = scale_factor(scale);
  std::vector<const SpecResult*> rows;
  for (const SpecResult* s : ranked(result)) {
    if (static_cast<int>(rows.size()) >= top_k) break;
    if (s->refutation && s->refutation->bootstrap.n_valid > 0) rows.push_back(s);
  }
  double lo = 0.0, hi = 0.0;
  for (const auto* s : rows) {
    lo = std::min({lo, s->refutation->bootstrap.lower * k, s->estimate->beta * k});
    hi = std::max({hi, s->refutation->bootstrap.upper * k, s->estimate->beta * k});
  }
  const double left = 190, width = 420, top = 40, step = 22;
  const double height = top + step * static_cast<double>(std::max<std::size_t>(rows.size(), 1)) + 50;
  const Axis x = padded(lo, hi, left, left + width);
  open_svg(out, left + width + 30, height,
           " data-xmin=\"" + g(x.lo) + "\" data-xmax=\"" + g(x.hi) + "\" data-px0=\"" + g(x.px0) +
               "\" data-px1=\"" + g(x.px1) + "\"");
  title(out, 10, 20, "Bootstrap confidence intervals, top signals");
  const double bottom = top + step * static_cast<double>(std::max<std::size_t>(rows.size(), 1));
  out << "<line class=\"zero\" x1=\"" << f(x(0)) << "\" y1=\"" << f(top - 8) << "\" x2=\""
      << f(x(0)) << "\" y2=\"" << f(bottom) << "\" stroke=\"#c00000\" stroke-dasharray=\"4 3\"/>\n";
  out << "<line class=\"axis\" x1=\"" << f(left) << "\" y1=\"" << f(bottom) << "\" x2=\""
      << f(left + width) << "\" y2=\"" << f(bottom) << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = x.lo + (x.hi - x.lo) * t / 4.0;
    out << "<text x=\"" << f(x(v)) << "\" y=\"" << f(bottom + 14)
        << "\" text-anchor=\"middle\">" << g(std::round(v * 1e4) / 1e4) << "</text>\n";
  }
  out << "<text x=\"" << f(left + width / 2) << "\" y=\"" << f(bottom + 32)
      << "\" text-anchor=\"middle\">" << esc(unit_label(scale)) << "</text>\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& s = *rows[i];
    const auto& b = s.refutation->bootstrap;
    const double y = top + step * (static_cast<double>(i) + 0.5);
    const char* colour = s.validated() ? kValidated : kFiltered;
    const std::string cls = s.validated() ? "validated" : "filtered";
    out << "<text x=\"" << f(left - 8) << "\" y=\"" << f(y + 4) << "\" text-anchor=\"end\">"
        << esc(s.spec.ticker + " " + s.spec.aspect + " lag " + std::to_string(s.spec.lag))
        << "</text>\n";
    out << "<line class=\"whisker " << cls << "\" data-spec=\"" << esc(s.spec.label())
        << "\" data-lower=\"" << g(b.lower * k) << "\" data-upper=\"" << g(b.upper * k)
        << "\" data-beta=\"" << g(s.estimate->beta * k) << "\" x1=\"" << f(x(b.lower * k))
        << "\" y1=\"" << f(y) << "\" x2=\"" << f(x(b.upper * k)) << "\" y2=\"" << f(y)
        << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    out << "<circle class=\"point " << cls << "\" cx=\"" << f(x(s.estimate->beta * k))
        << "\" cy=\"" << f(y) << "\" r=\"4\" fill=\"" << colour << "\"/>\n";
  }
  out << "</svg>\n";
}

void write_lag_profile(std::ostream& out, const GridResult& result, const std::string& ticker,
                       const std::string& aspect, Scale scale) {
  const double k = scale_factor(scale);
  std::vector<const SpecResult*> pts;
  for (const auto& s : result.specs)
    if (s.estimate && s.spec.ticker == ticker && s.spec.aspect == aspect) pts.push_back(&s);
  std::sort(pts.begin(), pts.end(),
            [](const auto* a, const auto* b) { return a->spec.lag < b->spec.lag; });
  double lo = 0.0, hi = 0.0;
  int max_lag = 0;
  for (const auto* s : pts) {
    lo = std::min(lo, s->estimate->beta * k);
    hi = std::max(hi, s->estimate->beta * k);
    max_lag = std::max(max_lag, s->spec.lag);
  }
  const double left = 70, width = 360, top = 40, height = 220;
  const Axis y = padded(lo, hi, top + height, top);
  const Axis x{-0.5, max_lag + 0.5, left, left + width};
  open_svg(out, left + width + 30, top + height + 50);
  title(out, 10, 20, ticker + " " + aspect + ": coefficient by lag");
  out << "<line class=\"baseline\" x1=\"" << f(left) << "\" y1=\"" << f(y(0)) << "\" x2=\""
      << f(left + width) << "\" y2=\"" << f(y(0)) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << f(14) << "\" y=\"" << f(top + height / 2) << "\" transform=\"rotate(-90 14 "
      << f(top + height / 2) << ")\" text-anchor=\"middle\">" << esc(unit_label(scale))
      << "</text>\n";
  for (const auto* s : pts) {
    const double b = s->estimate->beta * k;
    const bool v = s->validated();
    out << "<line class=\"stem\" x1=\"" << f(x(s->spec.lag)) << "\" y1=\"" << f(y(0))
        << "\" x2=\"" << f(x(s->spec.lag)) << "\" y2=\"" << f(y(b)) << "\" stroke=\""
        << (v ? kValidated : kFiltered) << "\" stroke-width=\"2\"/>\n";
    out << "<circle class=\"marker " << (v ? "validated" : "filtered") << "\" data-lag=\""
        << s->spec.lag << "\" data-beta=\"" << g(b) << "\" cx=\"" << f(x(s->spec.lag))
        << "\" cy=\"" << f(y(b)) << "\" r=\"" << (v ? 6 : 4) << "\" fill=\""
        << (v ? kValidated : "white") << "\" stroke=\"" << (v ? kValidated : kFiltered)
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << f(x(s->spec.lag)) << "\" y=\"" << f(top + height + 16)
        << "\" text-anchor=\"middle\">lag " << s->spec.lag << "</text>\n";
  }
  out << "</svg>\n";
}

void write_heatmap(std::ostream& out, const GridResult& result, Scale scale) {
  const double k = scale_factor(scale);
  double max_abs = 0.0;
  for (const auto& s : result.specs)
    if (s.validated()) max_abs = std::max(max_abs, std::abs(s.estimate->beta * k));
  const double left = 170, top = 50, cw = 64, ch = 20;
  const auto n_rows = result.tickers.size() * result.aspects.size();
  const auto n_cols = result.lags.size();
  open_svg(out, left + cw * static_cast<double>(n_cols) + 20,
           top + ch * static_cast<double>(n_rows) + 30);
  title(out, 10, 20, "Validated coefficients by aspect and lag");
  for (std::size_t c = 0; c < n_cols; ++c)
    out << "<text x=\"" << f(left + cw * (static_cast<double>(c) + 0.5)) << "\" y=\""
        << f(top - 6) << "\" text-anchor=\"middle\">lag " << result.lags[c] << "</text>\n";
  std::size_t row = 0;
  for (const auto& t : result.tickers) {
    for (const auto& a : result.aspects) {
      const double y = top + ch * static_cast<double>(row);
      out << "<text x=\"" << f(left - 6) << "\" y=\"" << f(y + ch * 0.7)
          << "\" text-anchor=\"end\">" << esc(t + " · " + a) << "</text>\n";
      for (std::size_t c = 0; c < n_cols; ++c) {
        const SpecResult* s = nullptr;
        for (const auto& cand : result.specs)
          if (cand.spec.ticker == t && cand.spec.aspect == a && cand.spec.lag == result.lags[c])
            s = &cand;
        const double x = left + cw * static_cast<double>(c);
        std::string fill = kGrey;
        std::string cls = "filtered";
        std::string label;
        double beta = std::nan("");
        if (s && s->estimate) beta = s->estimate->beta * k;
        if (!s || !s->estimate) cls = "skipped";
        if (s && s->validated()) {
          cls = "validated";
          const double w = max_abs > 0 ? std::abs(beta) / max_abs : 1.0;
          const int fade = static_cast<int>(std::lround(230 - 160 * w));
          char buf[16];
          if (beta >= 0)
            std::snprintf(buf, sizeof buf, "#%02x%02x%02x", fade, 200, fade);
          else
            std::snprintf(buf, sizeof buf, "#%02x%02x%02x", 220, fade, fade);
          fill = buf;
          char lab[32];
          std::snprintf(lab, sizeof lab, "%.2f", beta);
          label = lab;
        }
        out << "<rect class=\"cell " << cls << "\" data-spec=\"" << esc(t + "/" + a + "/" +
                                                                          std::to_string(result.lags[c]))
            << "\"";
        if (std::isfinite(beta)) out << " data-beta=\"" << g(beta) << "\"";
        out << " x=\"" << f(x) << "\" y=\"" << f(y) << "\" width=\"" << f(cw - 2)
            << "\" height=\"" << f(ch - 2) << "\" fill=\"" << fill << "\"/>\n";
        if (!label.empty())
          out << "<text x=\"" << f(x + cw / 2 - 1) << "\" y=\"" << f(y + ch * 0.7)
              << "\" text-anchor=\"middle\" font-size=\"10\">" << label << "</text>\n";
      }
      ++row;
    }
  }
  out << "</svg>\n";
}

void write_deflation_plot(std::ostream& out, const std::vector<ComparisonRow>& rows,
                          Scale scale) {
  const double k = scale_factor(scale);
  double hi_beta = 0.0;
  for (const auto& r : rows) hi_beta = std::max(hi_beta, r.abs_beta * k);
  const double left = 70, width = 400, top = 40, height = 260;
  const Axis x{0.0, 1.0, left, left + width};
  const Axis y = padded(0.0, hi_beta, top + height, top);
  open_svg(out, left + width + 30, top + height + 50);
  title(out, 10, 20, "Correlation against refutation-validated effect");
  out << "<line class=\"axis\" x1=\"" << f(left) << "\" y1=\"" << f(top + height) << "\" x2=\""
      << f(left + width) << "\" y2=\"" << f(top + height) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << f(left + width / 2) << "\" y=\"" << f(top + height + 32)
      << "\" text-anchor=\"middle\">|r|</text>\n";
  out << "<text x=\"" << f(14) << "\" y=\"" << f(top + height / 2) << "\" transform=\"rotate(-90 14 "
      << f(top + height / 2) << ")\" text-anchor=\"middle\">|beta|, " << esc(unit_label(scale))
      << "</text>\n";
  for (const auto& r : rows) {
    const char* cls = r.validated ? "validated" : r.flagged ? "flagged" : "filtered";
    const char* colour = r.validated ? kValidated : r.flagged ? "#c00000" : kFiltered;
    out << "<circle class=\"point " << cls << "\" data-spec=\"" << esc(r.spec.label())
        << "\" data-r=\"" << g(r.abs_r) << "\" data-beta=\"" << g(r.abs_beta * k) << "\" cx=\""
        << f(x(r.abs_r)) << "\" cy=\"" << f(y(r.abs_beta * k)) << "\" r=\"3.5\" fill=\""
        << colour << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace refute::pipeline
