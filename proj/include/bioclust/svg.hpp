#pragma once

// Minimal static SVG plots: line chart, scatter, confusion heatmap, waveforms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

namespace bioclust::svg {

inline constexpr std::string_view kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                                "#bcbd22", "#17becf"};

inline std::string_view colour(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

inline std::string escape(std::string_view s) {
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

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Plot frame with a data-to-pixel mapping.
struct Frame {
  double width = 640, height = 440;
  double left = 70, right = 20, top = 40, bottom = 55;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }

  void fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (!xs.empty()) {
      const auto [a, b] = std::minmax_element(xs.begin(), xs.end());
      x0 = *a, x1 = *b;
    }
    if (!ys.empty()) {
      const auto [a, b] = std::minmax_element(ys.begin(), ys.end());
      y0 = *a, y1 = *b;
    }
    pad(x0, x1);
    pad(y0, y1);
  }

  static void pad(double& lo, double& hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) lo = 0, hi = 1;
    const double span = hi - lo;
    if (span <= 0) {
      lo -= 0.5, hi += 0.5;
    } else {
      lo -= 0.05 * span, hi += 0.05 * span;
    }
  }
};

inline std::string open(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n" +
         "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"white\"/>\n";
}

inline std::string text(double x, double y, std::string_view s, std::string_view anchor = "middle", int size = 12,
                        std::string_view extra = {}) {
  std::string out = "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" +
                    std::to_string(size) + "\" text-anchor=\"" + std::string(anchor) + "\"";
  if (!extra.empty()) out += " " + std::string(extra);
  return out + ">" + escape(s) + "</text>\n";
}

inline std::string axes(const Frame& f, std::string_view title, std::string_view xlabel, std::string_view ylabel) {
  std::string out;
  const double xa = f.left, xb = f.width - f.right, ya = f.top, yb = f.height - f.bottom;
  out += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  out += "<line x1=\"" + num(xa) + "\" y1=\"" + num(yb) + "\" x2=\"" + num(xb) + "\" y2=\"" + num(yb) + "\"/>\n";
  out += "<line x1=\"" + num(xa) + "\" y1=\"" + num(ya) + "\" x2=\"" + num(xa) + "\" y2=\"" + num(yb) + "\"/>\n";
  out += "</g>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0, yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    out += text(f.px(xv), yb + 16, tick(xv), "middle", 10);
    out += text(xa - 6, f.py(yv) + 4, tick(yv), "end", 10);
  }
  out += text(f.width / 2, 22, title, "middle", 15);
  out += text((xa + xb) / 2, f.height - 14, xlabel);
  out += text(16, (ya + yb) / 2, ylabel, "middle", 12,
              "transform=\"rotate(-90 16 " + num((ya + yb) / 2) + ")\"");
  return out;
}

// Line with a marker per point; `highlight` (if inside xs) gets a ring.
inline std::string line_plot(const std::vector<double>& xs, const std::vector<double>& ys, std::string_view title,
                             std::string_view xlabel, std::string_view ylabel, double highlight = NAN) {
  Frame f;
  f.fit(xs, ys);
  std::string out = open(f.width, f.height) + axes(f, title, xlabel, ylabel);
  std::string pts;
  for (std::size_t i = 0; i < xs.size(); ++i) pts += num(f.px(xs[i])) + "," + num(f.py(ys[i])) + " ";
  out += "<polyline fill=\"none\" stroke=\"" + std::string(colour(0)) + "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out += "<circle cx=\"" + num(f.px(xs[i])) + "\" cy=\"" + num(f.py(ys[i])) + "\" r=\"4\" fill=\"" +
           std::string(colour(0)) + "\"/>\n";
    if (xs[i] == highlight)
      out += "<circle cx=\"" + num(f.px(xs[i])) + "\" cy=\"" + num(f.py(ys[i])) +
             "\" r=\"8\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  return out + "</svg>\n";
}

// One circle per point, coloured by group; legend entries in `group_names`.
inline std::string scatter(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<int>& groups,
                           const std::vector<std::string>& group_names, std::string_view title, std::string_view xlabel,
                           std::string_view ylabel) {
  Frame f;
  f.right = 130;
  f.fit(xs, ys);
  std::string out = open(f.width, f.height) + axes(f, title, xlabel, ylabel);
  out += "<g class=\"points\" fill-opacity=\"0.75\">\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out += "<circle cx=\"" + num(f.px(xs[i])) + "\" cy=\"" + num(f.py(ys[i])) + "\" r=\"3.5\" fill=\"" +
           std::string(colour(static_cast<std::size_t>(std::max(groups[i], 0)))) + "\"/>\n";
  out += "</g>\n<g class=\"legend\">\n";
  for (std::size_t g = 0; g < group_names.size(); ++g) {
    const double y = f.top + 10 + 18.0 * static_cast<double>(g);
    out += "<rect x=\"" + num(f.width - f.right + 12) + "\" y=\"" + num(y - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
           std::string(colour(g)) + "\"/>\n";
    out += text(f.width - f.right + 28, y, group_names[g], "start", 11);
  }
  return out + "</g>\n</svg>\n";
}

// Counts with row percentages; cell shade follows the row percentage.
inline std::string heatmap(const std::vector<std::vector<std::int64_t>>& counts, const std::vector<std::vector<double>>& row_pct,
                           const std::vector<std::string>& names, std::string_view title) {
  const std::size_t c = names.size();
  const double cell = c <= 2 ? 110 : 80, left = 130, top = 60;
  const double w = left + cell * static_cast<double>(c) + 30, h = top + cell * static_cast<double>(c) + 60;
  std::string out = open(w, h);
  out += text(w / 2, 24, title, "middle", 15);
  out += text(left + cell * static_cast<double>(c) / 2, 46, "predicted", "middle", 12);
  out += text(14, top + cell * static_cast<double>(c) / 2, "true", "middle", 12,
              "transform=\"rotate(-90 14 " + num(top + cell * static_cast<double>(c) / 2) + ")\"");
  out += "<g class=\"cells\">\n";
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double p = row_pct[i][j] / 100.0;
      const int shade = static_cast<int>(std::lround(255.0 - 200.0 * p));
      char fill[16];
      std::snprintf(fill, sizeof fill, "#%02x%02xff", shade, shade);
      const double x = left + cell * static_cast<double>(j), y = top + cell * static_cast<double>(i);
      out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cell) + "\" height=\"" + num(cell) +
             "\" fill=\"" + fill + "\" stroke=\"black\"/>\n";
      out += text(x + cell / 2, y + cell / 2 - 2, std::to_string(counts[i][j]), "middle", 14,
                  p > 0.6 ? "fill=\"white\"" : "");
      out += text(x + cell / 2, y + cell / 2 + 14, tick(row_pct[i][j]) + "%", "middle", 10,
                  p > 0.6 ? "fill=\"white\"" : "");
    }
  out += "</g>\n";
  for (std::size_t i = 0; i < c; ++i) {
    out += text(left - 8, top + cell * (static_cast<double>(i) + 0.5) + 4, names[i], "end", 11);
    out += text(left + cell * (static_cast<double>(i) + 0.5), top + cell * static_cast<double>(c) + 18, names[i],
                "middle", 11);
  }
  return out + "</svg>\n";
}

struct Series {
  std::string name;
  std::vector<double> y;
};

// Several series sampled on a common time axis starting at 0.
inline std::string waveform(const std::vector<Series>& series, double dt, std::string_view title) {
  Frame f;
  f.width = 900;
  f.height = 360;
  f.right = 150;
  std::vector<double> xs{0.0}, ys;
  for (const auto& s : series) {
    xs.push_back(dt * static_cast<double>(s.y.size() > 0 ? s.y.size() - 1 : 0));
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  f.fit(xs, ys);
  std::string out = open(f.width, f.height) + axes(f, title, "time (s)", "amplitude");
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::string pts;
    for (std::size_t i = 0; i < series[k].y.size(); ++i)
      pts += num(f.px(dt * static_cast<double>(i))) + "," + num(f.py(series[k].y[i])) + " ";
    out += "<polyline fill=\"none\" stroke=\"" + std::string(colour(k)) + "\" stroke-width=\"1\" points=\"" + pts +
           "\"/>\n";
    const double y = f.top + 10 + 18.0 * static_cast<double>(k);
    out += "<rect x=\"" + num(f.width - f.right + 12) + "\" y=\"" + num(y - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
           std::string(colour(k)) + "\"/>\n";
    out += text(f.width - f.right + 28, y, series[k].name, "start", 11);
  }
  return out + "</svg>\n";
}

}  // namespace bioclust::svg
