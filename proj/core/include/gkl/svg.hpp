#pragma once

#include <string>
#include <vector>

namespace gkl {

struct PlotSeries {
  std::string label;
  std::vector<double> ns;
  std::vector<double> values;
};

struct ReferenceLine {
  std::string label;
  double slope = 0.0;
};

struct PlotResult {
  bool written = false;
  int dropped_points = 0;  // nonpositive values filtered out
};

/// Self-contained log-log SVG: one polyline per series plus dashed reference
/// slope lines anchored at the lower right of the data. Nonpositive values
/// are dropped with a warning count; with no plottable points no file is
/// written.
PlotResult emit_plot(const std::vector<PlotSeries>& series,
                     const std::vector<ReferenceLine>& references,
                     const std::string& path);

}  // namespace gkl
