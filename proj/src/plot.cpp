#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "leakscope/harness.hpp"

namespace leakscope::harness {

// Minimal standalone SVG line plot: first column is the x axis, every
// remaining numeric column becomes a polyline. Log10 axes are applied when
// the data span several decades of positive values.
void write_svg_plot(const ResultTable& table, const std::string& path) {
  const int width = 760, height = 520, margin = 60;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("plot: cannot open " + path);
  if (table.columns.empty() || table.rows.empty()) {
    throw std::runtime_error("plot: empty table");
  }

  const auto spans_decades = [&](std::size_t col) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& row : table.rows) {
      if (!row[col] || !(*row[col] > 0.0)) return false;
      lo = std::min(lo, *row[col]);
      hi = std::max(hi, *row[col]);
    }
    return hi > 0.0 && lo > 0.0 && hi / lo > 100.0;
  };
  const bool logx = spans_decades(0);
  bool logy = true;
  for (std::size_t c = 1; c < table.columns.size(); ++c) {
    logy = logy && spans_decades(c);
  }

  const auto xval = [&](double v) { return logx ? std::log10(v) : v; };
  const auto yval = [&](double v) { return logy ? std::log10(v) : v; };

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& row : table.rows) {
    if (!row[0]) continue;
    xmin = std::min(xmin, xval(*row[0]));
    xmax = std::max(xmax, xval(*row[0]));
    for (std::size_t c = 1; c < table.columns.size(); ++c) {
      if (!row[c]) continue;
      if (logy && !(*row[c] > 0.0)) continue;
      ymin = std::min(ymin, yval(*row[c]));
      ymax = std::max(ymax, yval(*row[c]));
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;

  const auto px = [&](double x) {
    return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
  };
  const auto py = [&](double y) {
    return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
  };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\""
      << width - 2 * margin << "\" height=\"" << height - 2 * margin
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">" << table.columns[0]
      << (logx ? " (log10)" : "") << "</text>\n";

  for (std::size_t c = 1; c < table.columns.size(); ++c) {
    const char* color = kColors[(c - 1) % 6];
    std::ostringstream points;
    for (const auto& row : table.rows) {
      if (!row[0] || !row[c]) continue;
      if (logy && !(*row[c] > 0.0)) continue;
      points << px(xval(*row[0])) << "," << py(yval(*row[c])) << " ";
    }
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"" << points.str() << "\"/>\n";
    out << "<text x=\"" << margin + 8 << "\" y=\"" << margin + 18 * c
        << "\" fill=\"" << color << "\">" << table.columns[c] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace leakscope::harness
