#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace wavelink::cli::svg {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 64.0;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string fx(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view s) {
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

std::string tick_label(double v) {
  char buf[32];
  if (v == 0.0) return "0";
  const double a = std::abs(v);
  if (a >= 1e4 || a < 1e-3) std::snprintf(buf, sizeof buf, "%.2g", v);
  else std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  std::vector<double> out;
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step)
    out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) {
      const double pad = std::max(std::abs(lo) * 0.1, 0.5);
      lo -= pad;
      hi += pad;
    } else {
      const double pad = 0.05 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
  }
};

class Canvas {
 public:
  Canvas(std::string_view title, std::string_view tag) {
    out_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fx(kWidth) + "\" height=\"" + fx(kHeight) +
            "\" viewBox=\"0 0 " + fx(kWidth) + " " + fx(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out_ += "<!-- tag: " + escape(tag) + " -->\n";
    out_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    text(kWidth / 2, 26, title, "middle", 16);
  }

  void raw(const std::string& s) { out_ += s; }

  void text(double x, double y, std::string_view s, std::string_view anchor = "start", int size = 12,
            double rotate = 0.0) {
    out_ += "<text x=\"" + fx(x) + "\" y=\"" + fx(y) + "\" text-anchor=\"" + std::string(anchor) +
            "\" font-size=\"" + std::to_string(size) + "\"";
    if (rotate != 0.0) out_ += " transform=\"rotate(" + fx(rotate) + " " + fx(x) + " " + fx(y) + ")\"";
    out_ += ">" + escape(s) + "</text>\n";
  }

  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0,
            std::string_view extra = "") {
    out_ += "<line x1=\"" + fx(x1) + "\" y1=\"" + fx(y1) + "\" x2=\"" + fx(x2) + "\" y2=\"" + fx(y2) +
            "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + fx(width) + "\"" + std::string(extra) +
            "/>\n";
  }

  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view extra = "") {
    out_ += "<rect x=\"" + fx(x) + "\" y=\"" + fx(y) + "\" width=\"" + fx(w) + "\" height=\"" + fx(h) +
            "\" fill=\"" + std::string(fill) + "\"" + std::string(extra) + "/>\n";
  }

  void axis_labels(std::string_view x_label, std::string_view y_label) {
    text(kLeft + kPlotW / 2, kHeight - 18, x_label, "middle", 13);
    text(22, kTop + kPlotH / 2, y_label, "middle", 13, -90.0);
  }

  void frame() {
    rect(kLeft, kTop, kPlotW, kPlotH, "none", " stroke=\"#333\" stroke-width=\"1\"");
  }

  void legend_entry(std::size_t i, std::string_view name, std::string_view color) {
    const double y = kTop + 12 + 18.0 * static_cast<double>(i);
    line(kLeft + kPlotW + 14, y, kLeft + kPlotW + 34, y, color, 2.0);
    text(kLeft + kPlotW + 40, y + 4, name);
  }

  std::string finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  std::string out_;
};

struct Scale {
  double lo, hi, p0, p1;
  double operator()(double v) const { return p0 + (v - lo) / (hi - lo) * (p1 - p0); }
};

void draw_axes(Canvas& c, const Scale& sx, const Scale& sy, const std::vector<Tick>& x_ticks) {
  for (double t : nice_ticks(sy.lo, sy.hi)) {
    const double y = sy(t);
    c.line(kLeft, y, kLeft + kPlotW, y, "#e5e5e5");
    c.line(kLeft - 4, y, kLeft, y, "#333");
    c.text(kLeft - 7, y + 4, tick_label(t), "end");
  }
  if (x_ticks.empty()) {
    for (double t : nice_ticks(sx.lo, sx.hi)) {
      const double x = sx(t);
      c.line(x, kTop + kPlotH, x, kTop + kPlotH + 4, "#333");
      c.text(x, kTop + kPlotH + 18, tick_label(t), "middle");
    }
  } else {
    for (const auto& t : x_ticks) {
      if (t.at < sx.lo || t.at > sx.hi) continue;
      const double x = sx(t.at);
      c.line(x, kTop + kPlotH, x, kTop + kPlotH + 4, "#333");
      c.text(x, kTop + kPlotH + 18, t.label, "middle", 11);
    }
  }
}

void draw_markers(Canvas& c, const Scale& sx, const std::vector<Marker>& markers) {
  for (const auto& m : markers) {
    if (m.x < sx.lo || m.x > sx.hi) continue;
    const double x = sx(m.x);
    c.line(x, kTop, x, kTop + kPlotH, "#555", 1.0, " stroke-dasharray=\"4 3\"");
    c.text(x + 3, kTop + 12, m.label, "start", 11);
  }
}

std::string polyline(const Scale& sx, const Scale& sy, const std::vector<double>& x, const std::vector<double>& y,
                     std::string_view color) {
  std::string out;
  std::string pts;
  auto flush = [&] {
    if (!pts.empty())
      out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.3\" points=\"" + pts +
             "\"/>\n";
    pts.clear();
  };
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!std::isfinite(y[i])) {
      flush();
      continue;
    }
    if (!pts.empty()) pts += ' ';
    pts += fx(sx(x[i])) + "," + fx(sy(y[i]));
  }
  flush();
  return out;
}

// Five-stop perceptual ramp (dark blue through green to yellow).
std::string ramp(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                                               {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0);
  const double pos = t * 4.0;
  const std::size_t i = std::min<std::size_t>(3, static_cast<std::size_t>(pos));
  const double f = pos - static_cast<double>(i);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

}  // namespace

std::string render(const LineChart& chart, std::string_view tag) {
  Canvas c(chart.title, tag);
  Range rx, ry;
  for (const auto& l : chart.lines) {
    for (double v : l.x) rx.add(v);
    for (double v : l.y) ry.add(v);
  }
  if (rx.lo == rx.hi) rx.hi = rx.lo + 1.0;
  if (!std::isfinite(rx.lo)) rx.lo = 0.0, rx.hi = 1.0;
  if (chart.y_range) {
    ry.lo = chart.y_range->first;
    ry.hi = chart.y_range->second;
  } else {
    if (chart.reference_y) ry.add(*chart.reference_y);
    ry.finish();
  }
  const Scale sx{rx.lo, rx.hi, kLeft, kLeft + kPlotW};
  const Scale sy{ry.lo, ry.hi, kTop + kPlotH, kTop};
  draw_axes(c, sx, sy, chart.x_ticks);
  if (chart.reference_y)
    c.line(kLeft, sy(*chart.reference_y), kLeft + kPlotW, sy(*chart.reference_y), "#888", 1.0,
           " stroke-dasharray=\"6 4\"");
  for (std::size_t i = 0; i < chart.lines.size(); ++i) {
    const char* color = kPalette[i % kPalette.size()];
    c.raw(polyline(sx, sy, chart.lines[i].x, chart.lines[i].y, color));
    c.legend_entry(i, chart.lines[i].name, color);
  }
  draw_markers(c, sx, chart.markers);
  c.frame();
  c.axis_labels(chart.x_label, chart.y_label);
  return c.finish();
}

std::string render(const IntervalChart& chart, std::string_view tag) {
  Canvas c(chart.title, tag);
  Range rx, ry;
  for (const auto& s : chart.series) {
    for (double v : s.x) rx.add(v);
    for (double v : s.low) ry.add(v);
    for (double v : s.high) ry.add(v);
    for (double v : s.y) ry.add(v);
  }
  if (chart.reference_y) ry.add(*chart.reference_y);
  if (!std::isfinite(rx.lo)) rx.lo = 0.0, rx.hi = 1.0;
  rx.lo -= 0.5;
  rx.hi += 0.5;
  ry.finish();
  const Scale sx{rx.lo, rx.hi, kLeft, kLeft + kPlotW};
  const Scale sy{ry.lo, ry.hi, kTop + kPlotH, kTop};
  if (chart.fit)
    c.rect(sx(chart.fit->x_from), kTop, sx(chart.fit->x_to) - sx(chart.fit->x_from), kPlotH, "#f0f0f0");
  draw_axes(c, sx, sy, chart.x_ticks);
  if (chart.reference_y)
    c.line(kLeft, sy(*chart.reference_y), kLeft + kPlotW, sy(*chart.reference_y), "#888", 1.0,
           " stroke-dasharray=\"6 4\"");
  const double offset_step = chart.series.size() > 1 ? 0.5 / static_cast<double>(chart.series.size()) : 0.0;
  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    const char* color = kPalette[k % kPalette.size()];
    const double off = (static_cast<double>(k) - 0.5 * static_cast<double>(chart.series.size() - 1)) * offset_step;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = sx(s.x[i] + off);
      if (i < s.low.size() && std::isfinite(s.low[i]) && std::isfinite(s.high[i])) {
        c.line(x, sy(s.low[i]), x, sy(s.high[i]), color, 1.2);
        c.line(x - 4, sy(s.low[i]), x + 4, sy(s.low[i]), color, 1.2);
        c.line(x - 4, sy(s.high[i]), x + 4, sy(s.high[i]), color, 1.2);
      }
      if (std::isfinite(s.y[i]))
        c.raw("<circle cx=\"" + fx(x) + "\" cy=\"" + fx(sy(s.y[i])) + "\" r=\"3.5\" fill=\"" + color + "\"/>\n");
    }
    c.legend_entry(k, s.name, color);
  }
  if (chart.fit) {
    const auto& f = *chart.fit;
    c.line(sx(f.x_from), sy(f.slope * f.x_from + f.intercept), sx(f.x_to), sy(f.slope * f.x_to + f.intercept),
           "#000", 1.5, " stroke-dasharray=\"5 3\"");
  }
  c.frame();
  c.axis_labels(chart.x_label, chart.y_label);
  return c.finish();
}

std::string render(const Heatmap& map, std::string_view tag) {
  Canvas c(map.title, tag);
  constexpr std::size_t kMaxCols = 480;
  constexpr std::size_t kMaxRows = 160;
  constexpr int kLevels = 64;
  const std::size_t bc = std::max<std::size_t>(1, (map.cols + kMaxCols - 1) / kMaxCols);
  const std::size_t br = std::max<std::size_t>(1, (map.rows + kMaxRows - 1) / kMaxRows);
  const std::size_t gc = (map.cols + bc - 1) / bc;
  const std::size_t gr = (map.rows + br - 1) / br;
  const double cw = kPlotW / static_cast<double>(map.cols);
  const double rh = kPlotH / static_cast<double>(map.rows);
  const double span = map.vmax > map.vmin ? map.vmax - map.vmin : 1.0;

  // Block means quantized to the ramp, then merged into horizontal runs.
  std::vector<int> level(gr * gc, -1);
  std::vector<std::uint8_t> hi(gr * gc, 0);
  for (std::size_t r = 0; r < gr; ++r)
    for (std::size_t q = 0; q < gc; ++q) {
      double sum = 0.0;
      int count = 0, flagged = 0;
      for (std::size_t i = r * br; i < std::min(map.rows, (r + 1) * br); ++i)
        for (std::size_t j = q * bc; j < std::min(map.cols, (q + 1) * bc); ++j) {
          const double v = map.values[i * map.cols + j];
          if (std::isfinite(v)) {
            sum += v;
            ++count;
          }
          if (!map.highlight.empty()) flagged += map.highlight[i * map.cols + j];
        }
      if (count > 0) {
        const double t = (sum / count - map.vmin) / span;
        level[r * gc + q] = static_cast<int>(std::clamp(std::floor(t * kLevels), 0.0, kLevels - 1.0));
      }
      hi[r * gc + q] = 2 * flagged > count && count > 0;
    }
  std::string cells = "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t r = 0; r < gr; ++r) {
    std::size_t q = 0;
    while (q < gc) {
      const int lv = level[r * gc + q];
      std::size_t end = q + 1;
      while (end < gc && level[r * gc + end] == lv) ++end;
      const double x0 = kLeft + static_cast<double>(q * bc) * cw;
      const double x1 = kLeft + static_cast<double>(std::min(map.cols, end * bc)) * cw;
      const double y0 = kTop + static_cast<double>(r * br) * rh;
      const double y1 = kTop + static_cast<double>(std::min(map.rows, (r + 1) * br)) * rh;
      const std::string fill = lv < 0 ? "#bbbbbb" : ramp((lv + 0.5) / kLevels);
      cells += "<rect x=\"" + fx(x0) + "\" y=\"" + fx(y0) + "\" width=\"" + fx(x1 - x0) + "\" height=\"" +
               fx(y1 - y0) + "\" fill=\"" + fill + "\"/>\n";
      q = end;
    }
  }
  cells += "</g>\n";
  c.raw(cells);

  if (!map.shade_from_row.empty()) {
    std::string pts;
    for (std::size_t j = 0; j < map.cols; ++j) {
      const double x = kLeft + (static_cast<double>(j) + 0.5) * cw;
      const double y = kTop + std::clamp(map.shade_from_row[j], 0.0, static_cast<double>(map.rows)) * rh;
      if (j == 0) pts += fx(kLeft) + "," + fx(y) + " ";
      if (j % bc == 0 || j + 1 == map.cols) pts += fx(x) + "," + fx(y) + " ";
      if (j + 1 == map.cols) pts += fx(kLeft + kPlotW) + "," + fx(y) + " ";
    }
    pts += fx(kLeft + kPlotW) + "," + fx(kTop + kPlotH) + " " + fx(kLeft) + "," + fx(kTop + kPlotH);
    c.raw("<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
          "patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#ffffff\" "
          "stroke-width=\"1.5\"/></pattern></defs>\n");
    c.raw("<polygon points=\"" + pts + "\" fill=\"#ffffff\" fill-opacity=\"0.45\"/>\n");
    c.raw("<polygon points=\"" + pts + "\" fill=\"url(#hatch)\" stroke=\"#ffffff\" stroke-width=\"1.5\"/>\n");
  }

  if (!map.highlight.empty()) {
    std::string d;
    auto on = [&](std::ptrdiff_t r, std::ptrdiff_t q) {
      return r >= 0 && q >= 0 && r < static_cast<std::ptrdiff_t>(gr) && q < static_cast<std::ptrdiff_t>(gc) &&
             hi[static_cast<std::size_t>(r) * gc + static_cast<std::size_t>(q)];
    };
    for (std::size_t r = 0; r < gr; ++r)
      for (std::size_t q = 0; q < gc; ++q) {
        if (!hi[r * gc + q]) continue;
        const auto ri = static_cast<std::ptrdiff_t>(r), qi = static_cast<std::ptrdiff_t>(q);
        const double x0 = kLeft + static_cast<double>(q * bc) * cw;
        const double x1 = kLeft + static_cast<double>(std::min(map.cols, (q + 1) * bc)) * cw;
        const double y0 = kTop + static_cast<double>(r * br) * rh;
        const double y1 = kTop + static_cast<double>(std::min(map.rows, (r + 1) * br)) * rh;
        if (!on(ri - 1, qi)) d += "M" + fx(x0) + " " + fx(y0) + "H" + fx(x1);
        if (!on(ri + 1, qi)) d += "M" + fx(x0) + " " + fx(y1) + "H" + fx(x1);
        if (!on(ri, qi - 1)) d += "M" + fx(x0) + " " + fx(y0) + "V" + fx(y1);
        if (!on(ri, qi + 1)) d += "M" + fx(x1) + " " + fx(y0) + "V" + fx(y1);
      }
    if (!d.empty()) c.raw("<path d=\"" + d + "\" fill=\"none\" stroke=\"#000\" stroke-width=\"1.2\"/>\n");
  }

  if (!map.arrows.empty()) {
    const double len = 7.0;
    std::string d;
    for (std::size_t i = 0; i < map.rows; ++i)
      for (std::size_t j = 0; j < map.cols; ++j) {
        const double a = map.arrows[i * map.cols + j];
        if (!std::isfinite(a)) continue;
        const double cx = kLeft + (static_cast<double>(j) + 0.5) * cw;
        const double cy = kTop + (static_cast<double>(i) + 0.5) * rh;
        const double dx = std::cos(a) * len, dy = -std::sin(a) * len;
        const double hx = cx + dx, hy = cy + dy;
        const double back = 0.45 * len, wing = 0.5;
        d += "M" + fx(cx - dx) + " " + fx(cy - dy) + "L" + fx(hx) + " " + fx(hy);
        d += "M" + fx(hx - back * (std::cos(a) * std::cos(wing) + std::sin(a) * std::sin(wing))) + " " +
             fx(hy + back * (std::sin(a) * std::cos(wing) - std::cos(a) * std::sin(wing))) + "L" + fx(hx) + " " +
             fx(hy) + "L" + fx(hx - back * (std::cos(a) * std::cos(wing) - std::sin(a) * std::sin(wing))) + " " +
             fx(hy + back * (std::sin(a) * std::cos(wing) + std::cos(a) * std::sin(wing)));
      }
    if (!d.empty()) c.raw("<path d=\"" + d + "\" fill=\"none\" stroke=\"#000\" stroke-width=\"1\"/>\n");
  }

  for (const auto& t : map.x_ticks) {
    const double x = kLeft + (t.at + 0.5) * cw;
    c.line(x, kTop + kPlotH, x, kTop + kPlotH + 4, "#333");
    c.text(x, kTop + kPlotH + 18, t.label, "middle", 11);
  }
  for (const auto& t : map.y_ticks) {
    const double y = kTop + (t.at + 0.5) * rh;
    c.line(kLeft - 4, y, kLeft, y, "#333");
    c.text(kLeft - 7, y + 4, t.label, "end", 11);
  }
  for (const auto& m : map.markers) {
    if (m.x < 0 || m.x >= static_cast<double>(map.cols)) continue;
    const double x = kLeft + (m.x + 0.5) * cw;
    c.line(x, kTop, x, kTop + kPlotH, "#fff", 1.2, " stroke-dasharray=\"4 3\"");
    c.text(x + 3, kTop - 4, m.label, "start", 11);
  }

  // Colour bar.
  const double bx = kLeft + kPlotW + 24;
  for (int i = 0; i < kLevels; ++i) {
    const double y = kTop + kPlotH * (1.0 - static_cast<double>(i + 1) / kLevels);
    c.rect(bx, y, 16, kPlotH / kLevels + 0.5, ramp((i + 0.5) / kLevels));
  }
  c.rect(bx, kTop, 16, kPlotH, "none", " stroke=\"#333\"");
  for (double t : nice_ticks(map.vmin, map.vmax, 5)) {
    const double y = kTop + kPlotH * (1.0 - (t - map.vmin) / span);
    c.line(bx + 16, y, bx + 20, y, "#333");
    c.text(bx + 23, y + 4, tick_label(t));
  }
  c.frame();
  c.axis_labels(map.x_label, map.y_label);
  return c.finish();
}

}  // namespace wavelink::cli::svg
