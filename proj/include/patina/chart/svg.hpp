#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "patina/error.hpp"

namespace patina::chart {

struct Series {
  std::string name;
  std::vector<double> x;  // strictly increasing
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;

  void validate() const {
    if (series.empty()) {
      throw Error(ErrorCode::Config, "chart needs at least one series");
    }
    for (const auto& s : series) {
      if (s.x.empty() || s.x.size() != s.y.size()) {
        throw Error(ErrorCode::Config, "series '" + s.name + "' empty or x/y length mismatch");
      }
      for (size_t i = 0; i + 1 < s.x.size(); ++i) {
        if (!(s.x[i] < s.x[i + 1])) {
          throw Error(ErrorCode::Config, "series '" + s.name + "' x not strictly increasing");
        }
      }
      for (size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
          throw Error(ErrorCode::Config, "series '" + s.name + "' has non-finite values");
        }
      }
    }
  }
};

namespace detail {

inline const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                 "#d62728", "#9467bd", "#8c564b"};
inline constexpr size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

}  // namespace detail

/// Render a self-contained SVG 1.1 line chart. Exactly one <polyline> per
/// series; axes, ticks and legend swatches are <line>/<text> elements.
inline std::string render_chart(const ChartSpec& spec) {
  spec.validate();
  constexpr double kLeft = 70, kRight = 640, kTop = 46, kBottom = 420;

  double x_min = spec.series[0].x[0], x_max = x_min;
  double y_min = spec.series[0].y[0], y_max = y_min;
  for (const auto& s : spec.series) {
    for (double v : s.x) {
      x_min = std::min(x_min, v);
      x_max = std::max(x_max, v);
    }
    for (double v : s.y) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (x_max == x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max == y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  auto sx = [&](double v) { return kLeft + (v - x_min) / (x_max - x_min) * (kRight - kLeft); };
  auto sy = [&](double v) { return kBottom - (v - y_min) / (y_max - y_min) * (kBottom - kTop); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
         "height=\"480\" viewBox=\"0 0 800 480\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"480\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + detail::fmt((kLeft + kRight) / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         detail::xml_escape(spec.title) + "</text>\n";

  // Axes.
  svg += "<line x1=\"" + detail::fmt(kLeft) + "\" y1=\"" + detail::fmt(kBottom) + "\" x2=\"" +
         detail::fmt(kRight) + "\" y2=\"" + detail::fmt(kBottom) +
         "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + detail::fmt(kLeft) + "\" y1=\"" + detail::fmt(kTop) + "\" x2=\"" +
         detail::fmt(kLeft) + "\" y2=\"" + detail::fmt(kBottom) +
         "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";

  // Ticks: 5 per axis at quarter intervals.
  for (int t = 0; t <= 4; ++t) {
    const double xv = x_min + (x_max - x_min) * t / 4.0;
    const double yv = y_min + (y_max - y_min) * t / 4.0;
    const double px = sx(xv);
    const double py = sy(yv);
    svg += "<line x1=\"" + detail::fmt(px) + "\" y1=\"" + detail::fmt(kBottom) + "\" x2=\"" +
           detail::fmt(px) + "\" y2=\"" + detail::fmt(kBottom + 6) +
           "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + detail::fmt(px) + "\" y=\"" + detail::fmt(kBottom + 22) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           detail::fmt_tick(xv) + "</text>\n";
    svg += "<line x1=\"" + detail::fmt(kLeft - 6) + "\" y1=\"" + detail::fmt(py) + "\" x2=\"" +
           detail::fmt(kLeft) + "\" y2=\"" + detail::fmt(py) +
           "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + detail::fmt(kLeft - 10) + "\" y=\"" + detail::fmt(py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
           detail::fmt_tick(yv) + "</text>\n";
  }

  // Axis labels.
  svg += "<text x=\"" + detail::fmt((kLeft + kRight) / 2) + "\" y=\"" +
         detail::fmt(kBottom + 44) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         detail::xml_escape(spec.x_label) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + detail::fmt((kTop + kBottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 " +
         detail::fmt((kTop + kBottom) / 2) + ")\">" + detail::xml_escape(spec.y_label) +
         "</text>\n";

  // Series polylines.
  for (size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    const char* color = detail::kPalette[si % detail::kPaletteSize];
    std::string points;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (i) points += " ";
      points += detail::fmt(sx(s.x[i])) + "," + detail::fmt(sy(s.y[i]));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
  }

  // Legend.
  for (size_t si = 0; si < spec.series.size(); ++si) {
    const char* color = detail::kPalette[si % detail::kPaletteSize];
    const double ly = kTop + 16 + 22.0 * static_cast<double>(si);
    svg += "<line x1=\"" + detail::fmt(kRight + 14) + "\" y1=\"" + detail::fmt(ly) + "\" x2=\"" +
           detail::fmt(kRight + 40) + "\" y2=\"" + detail::fmt(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + detail::fmt(kRight + 46) + "\" y=\"" + detail::fmt(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           detail::xml_escape(spec.series[si].name) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace patina::chart
