#include "wavelink/contagion.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "distributions.hpp"
#include "wavelink/dependence.hpp"
#include "wavelink/error.hpp"

namespace wavelink {

std::vector<RollingCorrSeries> rolling_wavelet_correlation(std::span<const double> x, std::span<const double> y,
                                                           const RollingOptions& options, std::span<const Date> dates) {
  require(x.size() == y.size(), ErrorCode::InvalidArgument, "rolling correlation needs equal-length series");
  require(dates.empty() || dates.size() == x.size(), ErrorCode::InvalidArgument,
          "date index does not match the series length");
  require(options.levels >= 1 && options.levels <= 20, ErrorCode::InvalidArgument, "levels must lie in [1, 20]");
  require(options.step >= 1, ErrorCode::InvalidArgument, "step must be at least 1");
  const std::size_t min_window = std::size_t{4} << options.levels;
  require(options.window >= min_window, ErrorCode::InvalidArgument,
          "window of " + std::to_string(options.window) + " is too short for " + std::to_string(options.levels) +
              " levels (need at least " + std::to_string(min_window) + ")");
  require(options.window <= x.size(), ErrorCode::InsufficientData,
          "window of " + std::to_string(options.window) + " exceeds the " + std::to_string(x.size()) +
              " observations");

  const FilterPair filter = build_filter(options.filter);
  const std::size_t count = (x.size() - options.window) / options.step + 1;
  std::vector<RollingCorrSeries> out(static_cast<std::size_t>(options.levels));
  for (int j = 1; j <= options.levels; ++j) {
    auto& s = out[static_cast<std::size_t>(j - 1)];
    s.level = j;
    s.horizon = horizon_label(j);
    s.window_length = options.window;
    s.step = options.step;
    s.rho.reserve(count);
  }
  for (std::size_t w = 0; w < count; ++w) {
    const std::size_t start = w * options.step;
    const auto dx = modwt(x.subspan(start, options.window), options.levels, filter, options.boundary);
    const auto dy = modwt(y.subspan(start, options.window), options.levels, filter, options.boundary);
    const auto corr = wavelet_correlation(dx, dy);
    const std::size_t anchor = start + options.window - 1;
    for (auto& s : out) {
      s.anchors.push_back(anchor);
      if (!dates.empty()) s.anchor_dates.push_back(dates[anchor]);
      s.rho.push_back(corr.estimate[static_cast<std::size_t>(s.level - 1)]);
    }
  }
  return out;
}

EventTestResult welch_test(std::span<const double> before, std::span<const double> after) {
  require(before.size() >= 2 && after.size() >= 2, ErrorCode::InsufficientData,
          "t-test needs at least 2 windows on each side (have " + std::to_string(before.size()) + " before, " +
              std::to_string(after.size()) + " after)");
  auto moments = [](std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double a : v) ss += (a - m) * (a - m);
    return std::pair{m, ss / (n - 1.0)};
  };
  const auto [mb, vb] = moments(before);
  const auto [ma, va] = moments(after);
  const double nb = static_cast<double>(before.size()), na = static_cast<double>(after.size());

  EventTestResult r;
  r.mean_before = mb;
  r.mean_after = ma;
  r.n_before = before.size();
  r.n_after = after.size();
  const double qb = vb / nb, qa = va / na;
  const double se2 = qb + qa;
  if (se2 == 0.0) {
    const double diff = mb - ma;
    r.t_stat = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    r.dof = nb + na - 2.0;
    r.p_value = diff == 0.0 ? 1.0 : 0.0;
  } else {
    r.t_stat = (mb - ma) / std::sqrt(se2);
    // Welch-Satterthwaite degrees of freedom.
    r.dof = se2 * se2 / (qb * qb / (nb - 1.0) + qa * qa / (na - 1.0));
    r.p_value = detail::student_t_two_sided_p(r.t_stat, r.dof);
  }
  r.significant_1pct = r.p_value < 0.01;
  r.significant_5pct = r.p_value < 0.05;
  return r;
}

EventTestResult event_ttest(const RollingCorrSeries& rolling, std::size_t event_index, std::size_t pre_len,
                            std::size_t post_len) {
  require(pre_len >= 1 && post_len >= 1, ErrorCode::InvalidArgument, "event windows must be non-empty");
  const std::size_t lo = event_index >= pre_len ? event_index - pre_len : 0;
  std::vector<double> before, after;
  for (std::size_t i = 0; i < rolling.rho.size(); ++i) {
    const std::size_t a = rolling.anchors[i];
    if (a >= lo && a < event_index) before.push_back(rolling.rho[i]);
    else if (a >= event_index && a - event_index < post_len) after.push_back(rolling.rho[i]);
  }
  auto r = welch_test(before, after);
  r.level = rolling.level;
  r.horizon = rolling.horizon;
  return r;
}

}  // namespace wavelink
