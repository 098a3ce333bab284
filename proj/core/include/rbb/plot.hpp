#pragma once

// Minimal self-contained SVG charts for the experiment tables. Output is a
// pure function of the input, so identical rows give identical bytes.

#include <string>
#include <utility>
#include <vector>

#include "rbb/table.hpp"

namespace rbb {

enum class PlotKind { kLine, kScatter };

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  PlotKind kind = PlotKind::kLine;
  std::vector<PlotSeries> series;
};

/// Throws std::invalid_argument if there are no points at all.
std::string render_svg(const PlotSpec& spec);

/// One series per n with x = m/n and y = the per-(n, m) mean of the
/// experiment's measured column (reps without a value are skipped).
PlotSpec plot_spec_from_table(const ResultTable& table, PlotKind kind);

/// plot_spec_from_table + render_svg. Throws on an empty table.
std::string emit_plot(const ResultTable& table, PlotKind kind);

}  // namespace rbb
