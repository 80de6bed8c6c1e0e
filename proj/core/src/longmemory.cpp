#include "wavelink/longmemory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "distributions.hpp"
#include "wavelink/error.hpp"
#include "wavelink/modwt.hpp"

namespace wavelink {

LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
  require(x.size() == y.size() && x.size() == w.size() && x.size() >= 2, ErrorCode::InvalidArgument,
          "line fit needs matching inputs with at least 2 points");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(w[i] > 0.0, ErrorCode::InvalidArgument, "weights must be positive");
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    sxx += w[i] * x[i] * x[i];
    sxy += w[i] * x[i] * y[i];
  }
  const double delta = sw * sxx - sx * sx;
  require(delta > 0.0, ErrorCode::Numerical, "line fit needs at least two distinct x values");
  LineFit f;
  f.slope = (sw * sxy - sx * sy) / delta;
  f.intercept = (sxx * sy - sx * sxy) / delta;
  f.slope_se = std::sqrt(sw / delta);
  f.intercept_se = std::sqrt(sxx / delta);
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.slope * x[i] - f.intercept;
    f.rss += w[i] * r * r;
    scale = std::max(scale, std::abs(y[i]) + std::abs(f.slope * x[i]) + std::abs(f.intercept));
  }
  // Residuals at rounding level count as an exact fit.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  if (f.rss <= sw * floor * floor) f.rss = 0.0;
  return f;
}

HurstFit hurst_wls(std::span<const int> octaves, std::span<const double> eta, std::size_t n, int j1, int j2) {
  require(octaves.size() == eta.size(), ErrorCode::InvalidArgument, "octave and eta lengths differ");
  require(j2 - j1 >= 2, ErrorCode::InvalidArgument,
          "Hurst fit needs at least 3 octaves (got [" + std::to_string(j1) + ", " + std::to_string(j2) + "])");
  require(n > 0, ErrorCode::InvalidArgument, "series length must be positive");
  const double ln2sq = std::numbers::ln2 * std::numbers::ln2;
  std::vector<double> xs, ys, ws;
  for (std::size_t i = 0; i < octaves.size(); ++i) {
    const int j = octaves[i];
    if (j < j1 || j > j2) continue;
    require(std::isfinite(eta[i]), ErrorCode::Numerical, "eta is not finite at octave " + std::to_string(j));
    xs.push_back(j);
    ys.push_back(eta[i]);
    ws.push_back(static_cast<double>(n) * ln2sq / std::exp2(j + 1));
  }
  require(xs.size() == static_cast<std::size_t>(j2 - j1 + 1), ErrorCode::InsufficientData,
          "octaves " + std::to_string(j1) + ".." + std::to_string(j2) + " are not all available");
  const auto line = weighted_line_fit(xs, ys, ws);
  HurstFit fit;
  fit.j1 = j1;
  fit.j2 = j2;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.H = 0.5 * (line.slope + 1.0);
  fit.slope_se_asymptotic = line.slope_se;
  fit.intercept_se_asymptotic = line.intercept_se;

  const double dof = static_cast<double>(xs.size()) - 2.0;
  fit.std_err = 0.5 * line.slope_se * std::sqrt(line.rss / dof);
  if (fit.std_err > 0.0) {
    fit.t_value = fit.H / fit.std_err;
    fit.p_value = detail::student_t_two_sided_p(fit.t_value, dof);
  } else {
    fit.t_value = fit.H == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), fit.H);
    fit.p_value = fit.H == 0.0 ? 1.0 : 0.0;
  }
  return fit;
}

OctaveRange clip_octaves(std::size_t n, OctaveRange requested) {
  require(n >= 32, ErrorCode::InsufficientData, "long-memory estimation needs at least 32 observations");
  int top = 0;
  while ((std::size_t{4} << (top + 1)) <= n) ++top;  // floor(log2(n / 4))
  requested.j2 = std::min(requested.j2, top);
  return requested;
}

LogscaleDiagram logscale_diagram(std::span<const double> x, int j1, int j2, const std::string& filter,
                                 double confidence) {
  const std::size_t n = x.size();
  require(j1 >= 1, ErrorCode::InvalidArgument, "j1 must be at least 1");
  require(j2 <= max_level(n), ErrorCode::InvalidArgument,
          "j2 = " + std::to_string(j2) + " exceeds floor(log2(n)) = " + std::to_string(max_level(n)));
  require(j2 - j1 >= 2, ErrorCode::InvalidArgument, "logscale fit needs at least 3 octaves");
  const auto dec = modwt(x, j2, build_filter(filter), BoundaryMode::Periodic);
  const double alpha = 1.0 - confidence;
  detail::normal_two_sided_critical(confidence);

  LogscaleDiagram d;
  d.j1 = j1;
  d.j2 = j2;
  for (int j = 1; j <= j2; ++j) {
    const auto c = dyadic_coefficients(dec, j);
    require(c.size() >= 4, ErrorCode::InsufficientData,
            "octave " + std::to_string(j) + " has " + std::to_string(c.size()) + " coefficients (need 4)");
    double ss = 0.0;
    for (double v : c) ss += v * v;
    const double nj = static_cast<double>(c.size());
    const double v = ss / nj;
    require(v > 0.0, ErrorCode::Numerical, "zero energy at octave " + std::to_string(j));
    d.octaves.push_back(j);
    d.n_j.push_back(c.size());
    d.eta.push_back(std::log2(v));
    d.ci_low.push_back(std::log2(nj * v / detail::chi_squared_quantile(nj, 1.0 - alpha / 2.0)));
    d.ci_high.push_back(std::log2(nj * v / detail::chi_squared_quantile(nj, alpha / 2.0)));
  }
  d.fit = hurst_wls(d.octaves, d.eta, n, j1, j2);
  d.fit_slope = d.fit.slope;
  d.fit_intercept = d.fit.intercept;
  return d;
}

ScalingParams scaling_parameters(double alpha, double alpha_low, double alpha_high) {
  ScalingParams p;
  p.alpha = alpha;
  p.alpha_low = alpha_low;
  p.alpha_high = alpha_high;
  p.H_lrd = (1.0 + alpha) / 2.0;
  p.H_low = (1.0 + alpha_low) / 2.0;
  p.H_high = (1.0 + alpha_high) / 2.0;
  p.h_ss = p.H_lrd - 1.0;
  p.h_low = p.H_low - 1.0;
  p.h_high = p.H_high - 1.0;
  p.D = 2.0 - p.h_ss;
  p.D_low = 2.0 - p.h_high;
  p.D_high = 2.0 - p.h_low;
  return p;
}

ScalingParams scaling_parameters(const HurstFit& fit, double confidence) {
  const double z = detail::normal_two_sided_critical(confidence);
  auto p = scaling_parameters(fit.slope, fit.slope - z * fit.slope_se_asymptotic,
                              fit.slope + z * fit.slope_se_asymptotic);
  p.cf = std::exp2(fit.intercept);
  p.cf_low = std::exp2(fit.intercept - z * fit.intercept_se_asymptotic);
  p.cf_high = std::exp2(fit.intercept + z * fit.intercept_se_asymptotic);
  return p;
}

std::vector<RollingHurstPoint> rolling_hurst(std::span<const double> x, const RollingHurstOptions& options,
                                             std::span<const Date> dates) {
  require(dates.empty() || dates.size() == x.size(), ErrorCode::InvalidArgument,
          "date index does not match the series length");
  require(options.step >= 1, ErrorCode::InvalidArgument, "step must be at least 1");
  require(options.window <= x.size(), ErrorCode::InsufficientData,
          "window of " + std::to_string(options.window) + " exceeds the " + std::to_string(x.size()) +
              " observations");
  int j2 = options.j2;
  if (j2 == 0) j2 = clip_octaves(options.window, {options.j1, 8}).j2;
  require(j2 <= 30 && options.window >= (std::size_t{4} << j2), ErrorCode::InvalidArgument,
          "window of " + std::to_string(options.window) + " is too short for octave " + std::to_string(j2));

  std::vector<RollingHurstPoint> out;
  for (std::size_t start = 0; start + options.window <= x.size(); start += options.step) {
    RollingHurstPoint p;
    p.anchor = start + options.window - 1;
    if (!dates.empty()) p.date = dates[p.anchor];
    p.fit = logscale_diagram(x.subspan(start, options.window), options.j1, j2, options.filter).fit;
    out.push_back(p);
  }
  return out;
}

}  // namespace wavelink
