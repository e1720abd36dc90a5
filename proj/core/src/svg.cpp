#include "gkl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "gkl/errors.hpp"
#include "gkl/trace.hpp"

namespace gkl {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 600.0;
constexpr double kMarginL = 70.0;
constexpr double kMarginR = 170.0;  // room for the legend
constexpr double kMarginT = 30.0;
constexpr double kMarginB = 50.0;

const char* kPalette[] = {"#0072bd", "#d95319", "#edb120", "#7e2f8e",
                          "#77ac30", "#4dbeee", "#a2142f", "#ff00bf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

PlotResult emit_plot(const std::vector<PlotSeries>& series,
                     const std::vector<ReferenceLine>& references,
                     const std::string& path) {
  PlotResult result;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.ns.size() && i < s.values.size(); ++i) {
      if (!(s.ns[i] > 0.0) || !(s.values[i] > 0.0) || !std::isfinite(s.values[i])) {
        ++result.dropped_points;
        continue;
      }
      xmin = std::min(xmin, std::log10(s.ns[i]));
      xmax = std::max(xmax, std::log10(s.ns[i]));
      ymin = std::min(ymin, std::log10(s.values[i]));
      ymax = std::max(ymax, std::log10(s.values[i]));
    }
  }
  if (!(xmin <= xmax) || !(ymin <= ymax)) return result;  // nothing plottable
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  auto px = [&](double lx) { return kMarginL + (lx - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double ly) { return kMarginT + (ymax - ly) / (ymax - ymin) * plot_h; };

  create_parent_directories(path);
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

  // decade grid and tick labels
  for (long d = static_cast<long>(std::ceil(xmin)); d <= static_cast<long>(std::floor(xmax)); ++d) {
    const double x = px(static_cast<double>(d));
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << kMarginT << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << kMarginT + plot_h << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << kMarginT + plot_h + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (long d = static_cast<long>(std::ceil(ymin)); d <= static_cast<long>(std::floor(ymax)); ++d) {
    const double y = py(static_cast<double>(d));
    out << "<line x1=\"" << kMarginL << "\" y1=\"" << fmt(y) << "\" x2=\""
        << kMarginL + plot_w << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << kMarginL - 8 << "\" y=\"" << fmt(y + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">1e" << d << "</text>\n";
  }

  int color = 0;
  double legend_y = kMarginT + 12.0;
  for (const auto& s : series) {
    const char* stroke = kPalette[color % 8];
    ++color;
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.ns.size() && i < s.values.size(); ++i) {
      if (!(s.ns[i] > 0.0) || !(s.values[i] > 0.0) || !std::isfinite(s.values[i])) continue;
      out << fmt(px(std::log10(s.ns[i]))) << ',' << fmt(py(std::log10(s.values[i]))) << ' ';
    }
    out << "\"/>\n";
    out << "<line x1=\"" << kWidth - kMarginR + 10 << "\" y1=\"" << fmt(legend_y - 4)
        << "\" x2=\"" << kWidth - kMarginR + 34 << "\" y2=\"" << fmt(legend_y - 4)
        << "\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << kWidth - kMarginR + 40 << "\" y=\"" << fmt(legend_y)
        << "\" font-size=\"12\">" << s.label << "</text>\n";
    legend_y += 18.0;
  }

  // Reference lines pass through the lower right corner of the data box.
  for (const auto& ref : references) {
    // log-log slopes are base independent; anchor y(xmax) = ymin
    const double y_at_xmin = ymin + ref.slope * (xmin - xmax);
    out << "<line x1=\"" << fmt(px(xmin)) << "\" y1=\"" << fmt(py(y_at_xmin))
        << "\" x2=\"" << fmt(px(xmax)) << "\" y2=\"" << fmt(py(ymin))
        << "\" stroke=\"#555555\" stroke-dasharray=\"6,4\"/>\n";
    out << "<text x=\"" << kWidth - kMarginR + 40 << "\" y=\"" << fmt(legend_y)
        << "\" font-size=\"12\">" << (ref.label.empty() ? ("slope " + fmt(ref.slope)) : ref.label)
        << "</text>\n";
    out << "<line x1=\"" << kWidth - kMarginR + 10 << "\" y1=\"" << fmt(legend_y - 4)
        << "\" x2=\"" << kWidth - kMarginR + 34 << "\" y2=\"" << fmt(legend_y - 4)
        << "\" stroke=\"#555555\" stroke-dasharray=\"6,4\"/>\n";
    legend_y += 18.0;
  }

  out << "</svg>\n";
  if (!out) throw io_error("write failure on '" + path + "'");
  result.written = true;
  return result;
}

}  // namespace gkl
