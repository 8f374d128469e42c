#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace sobtri::cli {

namespace {

constexpr double kW = 640.0, kH = 480.0, kPad = 48.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double frac(double v) const { return hi > lo ? (v - lo) / (hi - lo) : 0.5; }
};

// blue -> white -> red
std::string colour(double s) {
  s = std::clamp(s, 0.0, 1.0);
  int r, g, b;
  if (s < 0.5) {
    const double k = s / 0.5;
    r = static_cast<int>(40 + 215 * k), g = static_cast<int>(80 + 175 * k), b = 255;
  } else {
    const double k = (s - 0.5) / 0.5;
    r = 255, g = static_cast<int>(255 - 175 * k), b = static_cast<int>(255 - 215 * k);
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string open(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kW) + "\" height=\"" + num(kH) +
         "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<text x=\"" + num(kPad) +
         "\" y=\"24\" font-family=\"monospace\" font-size=\"14\">" + title + "</text>\n";
}

std::string heatmap(const Table& t, const std::string& title) {
  Range rx, ry, rv;
  for (const auto& r : t.rows) rx.add(r[0]), ry.add(r[1]), rv.add(r[2]);
  const double w = kW - 2 * kPad, h = kH - 2 * kPad;
  const double cell = std::max(2.0, w / std::sqrt(static_cast<double>(t.rows.size()) * 2.0));
  std::string s = open(title + " [" + num(rv.lo) + ", " + num(rv.hi) + "]");
  for (const auto& r : t.rows) {
    const double px = kPad + rx.frac(r[0]) * w - cell / 2;
    const double py = kH - kPad - ry.frac(r[1]) * h - cell / 2;
    s += "<rect x=\"" + num(px) + "\" y=\"" + num(py) + "\" width=\"" + num(cell) + "\" height=\"" + num(cell) +
         "\" fill=\"" + colour(rv.frac(r[2])) + "\"/>\n";
  }
  return s + "</svg>\n";
}

std::string lines(const Table& t, const std::string& title) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  Range rx, ry;
  for (const auto& r : t.rows) {
    rx.add(r[0]);
    for (std::size_t c = 1; c < r.size(); ++c) ry.add(r[c]);
  }
  const double w = kW - 2 * kPad, h = kH - 2 * kPad;
  std::string s = open(title + " y in [" + num(ry.lo) + ", " + num(ry.hi) + "]");
  s += "<rect x=\"" + num(kPad) + "\" y=\"" + num(kPad) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
       "\" fill=\"none\" stroke=\"#888\"/>\n";
  for (std::size_t c = 1; c < t.header.size(); ++c) {
    std::string pts;
    for (const auto& r : t.rows) {
      if (!std::isfinite(r[c])) continue;
      pts += num(kPad + rx.frac(r[0]) * w) + "," + num(kH - kPad - ry.frac(r[c]) * h) + " ";
    }
    const char* col = palette[(c - 1) % 5];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(col) + "\" points=\"" + pts + "\"/>\n";
    s += "<text x=\"" + num(kW - kPad - 120) + "\" y=\"" + num(kPad + 16.0 * c) +
         "\" font-family=\"monospace\" font-size=\"12\" fill=\"" + col + "\">" + t.header[c] + "</text>\n";
  }
  return s + "</svg>\n";
}

}  // namespace

std::string render_svg(const Table& table, const std::string& title) {
  if (table.rows.empty() || table.header.size() < 2) return {};
  if (table.header.size() == 3 && table.header[0] == "x" && table.header[1] == "y") return heatmap(table, title);
  return lines(table, title);
}

}  // namespace sobtri::cli
