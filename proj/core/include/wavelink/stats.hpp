#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavelink/panel.hpp"

namespace wavelink {

/// Per-series descriptive statistics.
///
/// Higher moments use the sample standard deviation (n - 1 denominator):
/// skewness = m3 / s^3 and excess kurtosis = m4 / s^4 - 3, with m_k the k-th
/// central moment about the mean. Jarque-Bera = n/6 (S^2 + K^2/4). For a
/// zero-variance series the three shape statistics are empty.
struct StatsSummary {
  std::string name;
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double std_dev = 0.0;
  std::optional<double> skewness;
  std::optional<double> excess_kurtosis;
  std::optional<double> jarque_bera;
};

StatsSummary describe(std::span<const double> x, std::string name = {});
std::vector<StatsSummary> descriptive_stats(const Panel& panel);

double mean(std::span<const double> x);
/// Sample variance with n - 1 denominator.
double sample_variance(std::span<const double> x);
double median(std::span<const double> x);
/// Pearson correlation of two equal-length series.
double pearson(std::span<const double> a, std::span<const double> b);
/// Lag-k sample autocorrelation (biased, 1/n normalization).
double autocorrelation(std::span<const double> x, std::size_t lag);

/// Linear-interpolated empirical quantile (type 7), p in [0, 1].
double quantile(std::vector<double> values, double p);

}  // namespace wavelink
