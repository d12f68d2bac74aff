#pragma once
// svg.hpp: minimal deterministic line-chart writer. No external deps, fixed
// canvas, numbers printed with %.6g so output is byte-stable across runs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nrsense {

struct SvgSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<SvgSeries> series;
  double width = 720.0;
  double height = 480.0;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace detail

inline std::string to_svg(const SvgChart& chart) {
  const double ml = 72, mr = 24, mt = 40, mb = 56;  // margins
  const double pw = chart.width - ml - mr, ph = chart.height - mt - mb;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : chart.series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("svg: series x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double xv = s.x[i];
      if (chart.log_x) {
        if (!(xv > 0.0)) continue;
        xv = std::log10(xv);
      }
      if (!std::isfinite(xv) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, xv); xmax = std::max(xmax, xv);
      ymin = std::min(ymin, s.y[i]); ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmin <= xmax) || !(ymin <= ymax))
    throw std::invalid_argument("svg: no finite data to plot");
  if (xmax == xmin) { xmax += 0.5; xmin -= 0.5; }
  if (ymax == ymin) { ymax += 0.5; ymin -= 0.5; }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad; ymax += ypad;

  auto px = [&](double x) {
    if (chart.log_x) x = std::log10(x);
    return ml + pw * (x - xmin) / (xmax - xmin);
  };
  auto py = [&](double y) { return mt + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::svg_num(chart.width)
      << "\" height=\"" << detail::svg_num(chart.height) << "\" viewBox=\"0 0 "
      << detail::svg_num(chart.width) << " " << detail::svg_num(chart.height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes frame and ticks
  out << "<g stroke=\"#333\" fill=\"none\" stroke-width=\"1\">\n";
  out << "<rect x=\"" << detail::svg_num(ml) << "\" y=\"" << detail::svg_num(mt) << "\" width=\""
      << detail::svg_num(pw) << "\" height=\"" << detail::svg_num(ph) << "\"/>\n";
  out << "</g>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double fx = xmin + (xmax - xmin) * i / nticks;
    const double gx = ml + pw * i / double(nticks);
    const double label = chart.log_x ? std::pow(10.0, fx) : fx;
    out << "<line x1=\"" << detail::svg_num(gx) << "\" y1=\"" << detail::svg_num(mt + ph)
        << "\" x2=\"" << detail::svg_num(gx) << "\" y2=\"" << detail::svg_num(mt + ph + 4)
        << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << detail::svg_num(gx) << "\" y=\"" << detail::svg_num(mt + ph + 18)
        << "\" text-anchor=\"middle\">" << detail::svg_num(label) << "</text>\n";
    const double fy = ymin + (ymax - ymin) * i / nticks;
    const double gy = mt + ph * (1.0 - i / double(nticks));
    out << "<line x1=\"" << detail::svg_num(ml - 4) << "\" y1=\"" << detail::svg_num(gy)
        << "\" x2=\"" << detail::svg_num(ml) << "\" y2=\"" << detail::svg_num(gy)
        << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << detail::svg_num(ml - 8) << "\" y=\"" << detail::svg_num(gy + 4)
        << "\" text-anchor=\"end\">" << detail::svg_num(fy) << "</text>\n";
  }
  if (!chart.title.empty())
    out << "<text x=\"" << detail::svg_num(ml + pw / 2) << "\" y=\"" << detail::svg_num(mt - 14)
        << "\" text-anchor=\"middle\" font-size=\"15\">" << chart.title << "</text>\n";
  if (!chart.x_label.empty())
    out << "<text x=\"" << detail::svg_num(ml + pw / 2) << "\" y=\""
        << detail::svg_num(chart.height - 14) << "\" text-anchor=\"middle\">" << chart.x_label
        << "</text>\n";
  if (!chart.y_label.empty())
    out << "<text x=\"18\" y=\"" << detail::svg_num(mt + ph / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << detail::svg_num(mt + ph / 2)
        << ")\">" << chart.y_label << "</text>\n";
  out << "</g>\n";

  for (const auto& s : chart.series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (chart.log_x && !(s.x[i] > 0.0)) continue;
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!first) out << " ";
      out << detail::svg_num(px(s.x[i])) << "," << detail::svg_num(py(s.y[i]));
      first = false;
    }
    out << "\"/>\n";
  }

  // legend
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  double ly = mt + 16;
  for (const auto& s : chart.series) {
    if (s.label.empty()) continue;
    out << "<line x1=\"" << detail::svg_num(ml + 10) << "\" y1=\"" << detail::svg_num(ly - 4)
        << "\" x2=\"" << detail::svg_num(ml + 34) << "\" y2=\"" << detail::svg_num(ly - 4)
        << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << detail::svg_num(ml + 40) << "\" y=\"" << detail::svg_num(ly)
        << "\" fill=\"#333\">" << s.label << "</text>\n";
    ly += 16;
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace nrsense
