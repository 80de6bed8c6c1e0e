#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wavelink::cli::svg {

struct Tick {
  double at = 0.0;
  std::string label;
};

/// Vertical annotation at an x position (event dates).
struct Marker {
  double x = 0.0;
  std::string label;
};

struct Line {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Line> lines;
  std::vector<Tick> x_ticks;  // empty: numeric ticks
  std::vector<Marker> markers;
  std::optional<std::pair<double, double>> y_range;
  std::optional<double> reference_y;  // dashed horizontal rule
};

/// Points with vertical interval bars, optionally with a fitted line drawn
/// over a shaded x range.
struct IntervalSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> low;
  std::vector<double> high;
};

struct FitLine {
  double slope = 0.0;
  double intercept = 0.0;
  double x_from = 0.0;
  double x_to = 0.0;
};

struct IntervalChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<IntervalSeries> series;
  std::vector<Tick> x_ticks;
  std::optional<FitLine> fit;
  std::optional<double> reference_y;
};

/// Row-major grid drawn top row first. Large grids are block-averaged.
struct Heatmap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  double vmin = 0.0;
  double vmax = 1.0;
  std::vector<Tick> x_ticks;  // positions in column units
  std::vector<Tick> y_ticks;  // positions in row units
  std::vector<Marker> markers;
  /// Per column, the fractional row below which cells are unreliable; the
  /// region is drawn hatched and faded.
  std::vector<double> shade_from_row;
  /// Per cell phase angle for arrows; NaN draws nothing.
  std::vector<double> arrows;
  /// Per cell flag outlined as a contour-like dot layer.
  std::vector<std::uint8_t> highlight;
};

std::string render(const LineChart& chart, std::string_view tag);
std::string render(const IntervalChart& chart, std::string_view tag);
std::string render(const Heatmap& map, std::string_view tag);

/// About `count` evenly spaced ticks over [0, n) labelled by `label(i)`.
template <class F>
std::vector<Tick> index_ticks(std::size_t n, std::size_t count, F label) {
  std::vector<Tick> ticks;
  if (n == 0 || count == 0) return ticks;
  const std::size_t stride = std::max<std::size_t>(1, (n + count - 1) / count);
  for (std::size_t i = 0; i < n; i += stride) ticks.push_back({static_cast<double>(i), label(i)});
  return ticks;
}

}  // namespace wavelink::cli::svg
