#include "wavelink/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavelink/error.hpp"

namespace wavelink {

double mean(std::span<const double> x) {
  require(!x.empty(), ErrorCode::InsufficientData, "mean of empty series");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  require(x.size() >= 2, ErrorCode::InsufficientData, "variance needs at least 2 values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double median(std::span<const double> x) {
  require(!x.empty(), ErrorCode::InsufficientData, "median of empty series");
  std::vector<double> v(x.begin(), x.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, ErrorCode::InvalidArgument,
          "pearson: series must have equal length >= 2");
  const double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  require(saa > 0.0 && sbb > 0.0, ErrorCode::Numerical, "pearson: zero variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double autocorrelation(std::span<const double> x, std::size_t lag) {
  require(x.size() > lag + 1, ErrorCode::InsufficientData, "autocorrelation: series too short");
  const double m = mean(x);
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    den += (x[t] - m) * (x[t] - m);
    if (t + lag < x.size()) num += (x[t] - m) * (x[t + lag] - m);
  }
  require(den > 0.0, ErrorCode::Numerical, "autocorrelation: constant series");
  return num / den;
}

double quantile(std::vector<double> values, double p) {
  require(!values.empty(), ErrorCode::InsufficientData, "quantile of empty sample");
  require(p >= 0.0 && p <= 1.0, ErrorCode::InvalidArgument, "quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

StatsSummary describe(std::span<const double> x, std::string name) {
  require(x.size() >= 4, ErrorCode::InsufficientData,
          "descriptive statistics need at least 4 observations" + (name.empty() ? "" : " ('" + name + "')"));
  StatsSummary s;
  s.name = std::move(name);
  s.count = x.size();
  s.mean = mean(x);
  s.median = median(x);
  auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  s.min = *lo;
  s.max = *hi;
  const double var = sample_variance(x);
  s.std_dev = std::sqrt(var);
  if (var > 0.0) {
    double m3 = 0.0, m4 = 0.0;
    for (double v : x) {
      const double d = v - s.mean;
      m3 += d * d * d;
      m4 += d * d * d * d;
    }
    const double n = static_cast<double>(x.size());
    m3 /= n;
    m4 /= n;
    const double skew = m3 / (var * s.std_dev);
    const double kurt = m4 / (var * var) - 3.0;
    s.skewness = skew;
    s.excess_kurtosis = kurt;
    s.jarque_bera = n / 6.0 * (skew * skew + kurt * kurt / 4.0);
  }
  return s;
}

std::vector<StatsSummary> descriptive_stats(const Panel& panel) {
  std::vector<StatsSummary> out;
  out.reserve(panel.n_series());
  for (std::size_t i = 0; i < panel.n_series(); ++i) out.push_back(describe(panel.series(i), panel.names[i]));
  return out;
}

}  // namespace wavelink
