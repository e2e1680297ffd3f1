#pragma once

// Minimal static line plots: one polyline per series in an 800x500 viewport.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "halanay/report.hpp"

namespace halanay {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Renders the series; with `log_y`, values are plotted as log10(max(y, 1e-16)).
/// Long series are decimated to at most 2000 points each.
[[nodiscard]] inline std::string render_svg(const std::string& title, const std::vector<PlotSeries>& series,
                                            bool log_y = false) {
  constexpr double kWidth = 800.0;
  constexpr double kHeight = 500.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 20.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 50.0;
  static const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  auto yv = [&](double v) { return log_y ? std::log10(std::max(v, 1e-16)) : v; };
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, yv(s.y[i]));
      y1 = std::max(y1, yv(s.y[i]));
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - (yv(v) - y0) / (y1 - y0)) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
  out += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  out += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" + title +
         "</text>\n";
  out += "<rect x=\"70\" y=\"40\" width=\"710\" height=\"410\" fill=\"none\" stroke=\"#444\"/>\n";
  auto label = [&](double x, double y, const std::string& text, const char* anchor) {
    out += "<text x=\"" + format_double(x) + "\" y=\"" + format_double(y) + "\" text-anchor=\"" + anchor +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + text + "</text>\n";
  };
  label(kLeft, kHeight - 28, format_double(x0), "start");
  label(kWidth - kRight, kHeight - 28, format_double(x1), "end");
  label(kLeft - 6, kTop + 10, (log_y ? "1e" : "") + format_double(y1), "end");
  label(kLeft - 6, kHeight - kBottom, (log_y ? "1e" : "") + format_double(y0), "end");
  label(400, kHeight - 12, "t", "middle");

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    const std::size_t stride = std::max<std::size_t>(1, ser.x.size() / 2000);
    out += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"";
    out += kColors[s % 6];
    out += "\" points=\"";
    for (std::size_t i = 0; i < ser.x.size(); i += stride) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(ser.x[i]), py(ser.y[i]));
      out += buf;
    }
    out += "\"/>\n";
    label(kLeft + 10, kTop + 16 + 14.0 * static_cast<double>(s), ser.label, "start");
  }
  out += "</svg>\n";
  return out;
}

[[nodiscard]] inline PlotSeries plot_series(const std::string& label, const SampledSeries& s) {
  PlotSeries p{label, {}, s.values};
  p.x.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) p.x.push_back(s.time(k));
  return p;
}

}  // namespace halanay
