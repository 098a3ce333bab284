#include "rbb/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "rbb/experiments.hpp"

namespace rbb {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 50;
constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
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

// Pads degenerate ranges so a single point still gets visible axes.
std::pair<double, double> padded(double lo, double hi) {
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  std::size_t points = 0;
  for (const auto& s : spec.series) {
    for (auto [x, y] : s.points) {
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
      ++points;
    }
  }
  if (points == 0) throw std::invalid_argument("render_svg: nothing to plot");
  std::tie(xlo, xhi) = padded(xlo, xhi);
  std::tie(ylo, yhi) = padded(ylo, yhi);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xlo) / (xhi - xlo) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - ylo) / (yhi - ylo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(spec.title) << "</text>\n";

  // axes and ticks
  o << "<g stroke=\"black\" stroke-width=\"1\">\n";
  o << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(kLeft + pw)
    << "\" y2=\"" << num(kTop + ph) << "\"/>\n";
  o << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
    << "\" y2=\"" << num(kTop + ph) << "\"/>\n";
  o << "</g>\n<g font-size=\"11\">\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = xlo + (xhi - xlo) * i / kTicks;
    const double fy = ylo + (yhi - ylo) * i / kTicks;
    o << "<line x1=\"" << num(sx(fx)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(sx(fx))
      << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << num(sx(fx)) << "\" y=\"" << num(kTop + ph + 18)
      << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
    o << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(sy(fy)) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(sy(fy)) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(fy) + 4)
      << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
  }
  o << "</g>\n";
  o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 10)
    << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(spec.x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\""
    << " transform=\"rotate(-90 16 " << num(kTop + ph / 2) << ")\">" << escape(spec.y_label)
    << "</text>\n";

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    const char* color = kPalette[k % kPalette.size()];
    if (spec.kind == PlotKind::kLine && s.points.size() > 1) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (i) o << ' ';
        o << num(sx(s.points[i].first)) << ',' << num(sy(s.points[i].second));
      }
      o << "\"/>\n";
    }
    for (auto [x, y] : s.points) {
      o << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"3\" fill=\""
        << color << "\"/>\n";
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    const double lx = kLeft + pw + 15;
    o << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 8) << "\" width=\"10\" height=\"10\" fill=\""
      << color << "\"/><text x=\"" << num(lx + 15) << "\" y=\"" << num(ly + 1)
      << "\" font-size=\"12\">" << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

PlotSpec plot_spec_from_table(const ResultTable& table, PlotKind kind) {
  if (table.rows.empty()) throw std::invalid_argument("emit_plot: empty input");
  const ResultTable summary = summarize(table);
  PlotSpec spec;
  spec.kind = kind;
  spec.x_label = "m/n";
  if (table.experiment == "max_load") {
    spec.title = "Maximum load";
    spec.y_label = "mean max load";
  } else if (table.experiment == "empty_fraction") {
    spec.title = "Fraction of empty bins vs average load";
    spec.y_label = "mean empty fraction";
  } else if (table.experiment == "convergence") {
    spec.title = "Rounds to reach the max-load threshold";
    spec.y_label = "mean rounds";
  } else {
    spec.title = "All-ball cover time";
    spec.y_label = "mean max cover round";
  }
  std::map<long long, PlotSeries> by_n;
  for (const auto& row : summary.rows) {
    if (row[4].empty()) continue;
    const long long n = std::stoll(row[0]);
    auto& s = by_n[n];
    s.label = "n=" + row[0];
    s.points.emplace_back(std::stod(row[1]) / static_cast<double>(n), std::stod(row[4]));
  }
  for (auto& [n, s] : by_n) {
    std::sort(s.points.begin(), s.points.end());
    spec.series.push_back(std::move(s));
  }
  return spec;
}

std::string emit_plot(const ResultTable& table, PlotKind kind) {
  return render_svg(plot_spec_from_table(table, kind));
}

}  // namespace rbb
