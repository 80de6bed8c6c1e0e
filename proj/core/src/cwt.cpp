#include "wavelink/cwt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cwt_plan.hpp"
#include "fft.hpp"
#include "wavelink/error.hpp"

namespace wavelink {

void MorletParams::validate() const {
  require(omega0 >= 5.0, ErrorCode::InvalidArgument, "Morlet omega0 must be at least 5 for admissibility");
  require(sigma > 0.0, ErrorCode::InvalidArgument, "Morlet sigma must be positive");
  require(s0 > 0.0 && dj > 0.0 && dt > 0.0, ErrorCode::InvalidArgument, "s0, dj and dt must be positive");
  require(n_scales >= 0, ErrorCode::InvalidArgument, "number of scales must be positive");
}

double MorletParams::fourier_factor() const {
  return 4.0 * std::numbers::pi / (omega0 + std::sqrt(omega0 * omega0 + 2.0 / (sigma * sigma)));
}

std::vector<double> scale_grid(std::size_t n, const MorletParams& params) {
  params.validate();
  const double span = static_cast<double>(n) * params.dt;
  int count = params.n_scales;
  if (count == 0) {
    const double octaves = std::log2(span / 4.0 / params.s0);
    require(octaves >= -1e-12, ErrorCode::InvalidArgument,
            "smallest scale " + std::to_string(params.s0) + " exceeds a quarter of the series span");
    count = static_cast<int>(std::floor(octaves / params.dj + 1e-9)) + 1;
  }
  std::vector<double> s(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) s[static_cast<std::size_t>(j)] = params.s0 * std::exp2(j * params.dj);
  require(s.back() <= span * (1.0 + 1e-12), ErrorCode::InvalidArgument,
          "largest scale " + std::to_string(s.back()) + " exceeds the series span " + std::to_string(span));
  return s;
}

std::vector<double> cone_of_influence(std::size_t n, const MorletParams& params) {
  params.validate();
  require(n >= 2, ErrorCode::InsufficientData, "cone of influence needs at least 2 points");
  const double efold = std::numbers::sqrt2 * params.sigma;
  std::vector<double> coi(n);
  for (std::size_t b = 0; b < n; ++b)
    coi[b] = static_cast<double>(std::min(b, n - 1 - b)) * params.dt / efold;
  return coi;
}

namespace detail {

CwtPlan::CwtPlan(std::size_t n, const MorletParams& params)
    : n_(n), padded_(2 * next_pow2(n)), params_(params), scales_(scale_grid(n, params)) {
  const double pi = std::numbers::pi;
  const double norm0 = std::pow(pi, -0.25) * std::sqrt(params.sigma);
  const double domega = 2.0 * pi / (static_cast<double>(padded_) * params.dt);
  // Skip bins where the Gaussian has decayed below e^-40 relative to its peak.
  const double reach = std::sqrt(80.0) / params.sigma;
  for (double s : scales_) {
    const double amp = norm0 * std::sqrt(2.0 * pi * s / params.dt);
    const double lo = std::max((params.omega0 - reach) / s, 0.0);
    const double hi = (params.omega0 + reach) / s;
    auto first = static_cast<std::size_t>(std::ceil(lo / domega));
    first = std::max<std::size_t>(first, 1);
    const auto last = std::min(static_cast<std::size_t>(std::floor(hi / domega)), padded_ / 2);
    std::vector<double> band;
    for (std::size_t k = first; k <= last; ++k) {
      const double u = s * domega * static_cast<double>(k) - params.omega0;
      band.push_back(amp * std::exp(-0.5 * params.sigma * params.sigma * u * u));
    }
    band_start_.push_back(first);
    band_.push_back(std::move(band));
  }
}

void CwtPlan::transform(std::span<const double> x, std::vector<std::complex<double>>& out) const {
  require(x.size() == n_, ErrorCode::InvalidArgument, "series length does not match the CWT plan");
  const double mu = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n_);
  cvec spectrum(padded_, 0.0);
  for (std::size_t t = 0; t < n_; ++t) spectrum[t] = x[t] - mu;
  fft_forward(spectrum);

  out.assign(scales_.size() * n_, 0.0);
  cvec work(padded_);
  const double inv = 1.0 / static_cast<double>(padded_);
  for (std::size_t j = 0; j < scales_.size(); ++j) {
    std::fill(work.begin(), work.end(), 0.0);
    const auto& band = band_[j];
    for (std::size_t i = 0; i < band.size(); ++i) {
      const std::size_t k = band_start_[j] + i;
      work[k] = spectrum[k] * band[i];
    }
    fft_inverse(work);
    for (std::size_t t = 0; t < n_; ++t) out[j * n_ + t] = work[t] * inv;
  }
}

}  // namespace detail

CwtField cwt_morlet(std::span<const double> x, const MorletParams& params) {
  require(x.size() >= 16, ErrorCode::InsufficientData, "CWT needs at least 16 observations");
  detail::CwtPlan plan(x.size(), params);
  CwtField field;
  field.scales = plan.scales();
  field.n_times = x.size();
  const double factor = params.fourier_factor();
  for (double s : field.scales) field.periods.push_back(s * factor);
  plan.transform(x, field.coeffs);
  return field;
}

}  // namespace wavelink
