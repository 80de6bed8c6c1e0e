#include <algorithm>
#include <cmath>
#include <random>

#include "fft.hpp"
#include "wavelink/error.hpp"
#include "wavelink/longmemory.hpp"

namespace wavelink {

double fgn_autocovariance(double hurst, std::size_t lag) {
  const double k = static_cast<double>(lag);
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::abs(k - 1.0), h2));
}

std::vector<double> synth_fgn(double hurst, std::size_t n, std::uint64_t seed) {
  require(hurst > 0.0 && hurst < 1.0, ErrorCode::InvalidArgument, "Hurst exponent must lie in (0, 1)");
  require(n >= 64, ErrorCode::InvalidArgument, "fGn length must be at least 64");

  std::size_t half = detail::next_pow2(n);
  for (int attempt = 0; attempt < 2; ++attempt, half *= 2) {
    const std::size_t m = 2 * half;
    detail::cvec row(m);
    for (std::size_t k = 0; k <= half; ++k) row[k] = fgn_autocovariance(hurst, k);
    for (std::size_t k = half + 1; k < m; ++k) row[k] = row[m - k];
    detail::fft_forward(row);
    double peak = 0.0, lowest = 0.0;
    for (const auto& v : row) {
      peak = std::max(peak, v.real());
      lowest = std::min(lowest, v.real());
    }
    if (lowest < -1e-10 * peak) continue;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    detail::cvec z(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double scale = std::sqrt(std::max(row[k].real(), 0.0) / static_cast<double>(m));
      const double a = normal(rng);
      const double b = normal(rng);
      z[k] = {scale * a, scale * b};
    }
    detail::fft_forward(z);
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) out[t] = z[t].real();
    return out;
  }
  fail(ErrorCode::Numerical, "circulant embedding of the fGn covariance is not positive semi-definite");
}

}  // namespace wavelink
