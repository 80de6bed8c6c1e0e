#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wavelink {

/// Morlet mother wavelet exp(i omega0 t) exp(-t^2 / (2 sigma^2)) and the scale
/// grid s_j = s0 * 2^(j dj), j = 0 .. n_scales - 1. Scales and `dt` share a
/// time unit; n_scales = 0 picks the largest grid with s <= n dt / 4.
struct MorletParams {
  double omega0 = 6.0;
  double sigma = 1.0;
  double s0 = 2.0;
  double dj = 1.0 / 12.0;
  double dt = 1.0;
  int n_scales = 0;

  void validate() const;
  /// Fourier period of the power peak for scale 1.
  double fourier_factor() const;
};

/// Complex coefficients stored row-major, one row per scale.
struct CwtField {
  std::vector<double> scales;
  std::vector<double> periods;
  std::size_t n_times = 0;
  std::vector<std::complex<double>> coeffs;

  std::size_t n_scales() const { return scales.size(); }
  std::complex<double> at(std::size_t scale, std::size_t time) const { return coeffs[scale * n_times + time]; }
  double power(std::size_t scale, std::size_t time) const { return std::norm(at(scale, time)); }
};

std::vector<double> scale_grid(std::size_t n, const MorletParams& params);

/// Frequency-domain CWT of the mean-removed series, zero padded to twice the
/// next power of two. Daughters carry unit energy, so white noise of variance
/// v has expected power v at every scale.
CwtField cwt_morlet(std::span<const double> x, const MorletParams& params);

/// Largest trustworthy scale at each time: distance to the nearest edge over
/// the power e-folding time sqrt(2) sigma per unit scale.
std::vector<double> cone_of_influence(std::size_t n, const MorletParams& params);

}  // namespace wavelink
