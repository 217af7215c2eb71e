#pragma once

// Minimal SVG line charts: hand-written polyline paths, no plotting
// dependency.

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "c2ucb/csv.hpp"

namespace c2ucb {

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> values;  // x is the 1-based index
};

inline void write_line_chart(std::ostream& os, const std::string& title,
                             const std::vector<SvgSeries>& series) {
  const double w = 720, h = 420;
  const double left = 70, right = 20, top = 40, bottom = 50;
  double ymin = 0.0, ymax = 1e-12;
  std::size_t nmax = 1;
  for (const SvgSeries& s : series) {
    nmax = std::max(nmax, s.values.size());
    for (double v : s.values) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  const double px = (w - left - right) / static_cast<double>(std::max<std::size_t>(nmax - 1, 1));
  const double py = (h - top - bottom) / (ymax - ymin);

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  // axes
  os << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\""
     << w - right << "\" y2=\"" << h - bottom
     << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
     << "\" y2=\"" << h - bottom << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << left - 8 << "\" y=\"" << h - bottom
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
     << fmt9(ymin) << "</text>\n";
  os << "<text x=\"" << left - 8 << "\" y=\"" << top + 4
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
     << fmt9(ymax) << "</text>\n";
  os << "<text x=\"" << w - right << "\" y=\"" << h - bottom + 16
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">t="
     << nmax << "</text>\n";

  double legend_y = top;
  for (const SvgSeries& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const double x = left + px * static_cast<double>(i);
      const double y = h - bottom - (s.values[i] - ymin) * py;
      os << x << ',' << y << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << w - right - 150 << "\" y=\"" << legend_y
       << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << s.color
       << "\">" << s.label << "</text>\n";
    legend_y += 16;
  }
  os << "</svg>\n";
}

}  // namespace c2ucb
