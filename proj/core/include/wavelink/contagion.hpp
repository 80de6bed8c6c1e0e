#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavelink/modwt.hpp"
#include "wavelink/panel.hpp"

namespace wavelink {

struct RollingOptions {
  int levels = 6;
  std::size_t window = 256;
  std::size_t step = 1;
  std::string filter = "LA8";
  BoundaryMode boundary = BoundaryMode::Reflection;
};

/// Wavelet correlation of one level over sliding windows. Window w covers
/// observations [w * step, w * step + window_length) and is anchored at its
/// last observation.
struct RollingCorrSeries {
  int level = 0;
  std::string horizon;
  std::size_t window_length = 0;
  std::size_t step = 0;
  std::vector<std::size_t> anchors;
  std::vector<Date> anchor_dates;  // empty when no dates were supplied
  std::vector<double> rho;
};

/// One series per level d1..dJ. `dates`, when non-empty, must match the
/// series length and fills `anchor_dates`.
std::vector<RollingCorrSeries> rolling_wavelet_correlation(std::span<const double> x, std::span<const double> y,
                                                           const RollingOptions& options = {},
                                                           std::span<const Date> dates = {});

struct EventTestResult {
  int level = 0;
  std::string horizon;
  double mean_before = 0.0;
  double mean_after = 0.0;
  /// Welch statistic for before - after, so a rise in correlation is negative.
  double t_stat = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  bool significant_1pct = false;
  bool significant_5pct = false;
  std::size_t n_before = 0;
  std::size_t n_after = 0;
};

/// Two-sided Welch test on two samples. When both samples have zero variance
/// the statistic is 0 (equal means) or +-infinity.
EventTestResult welch_test(std::span<const double> before, std::span<const double> after);

/// Splits a rolling series at `event_index` (an observation index): windows
/// anchored in [event - pre_len, event) form the before sample and those in
/// [event, event + post_len) the after sample.
EventTestResult event_ttest(const RollingCorrSeries& rolling, std::size_t event_index, std::size_t pre_len = 250,
                            std::size_t post_len = 250);

}  // namespace wavelink
