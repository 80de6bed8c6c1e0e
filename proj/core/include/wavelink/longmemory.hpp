#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wavelink/panel.hpp"

namespace wavelink {

/// Unit-variance fractional Gaussian noise by circulant embedding of the
/// exact autocovariance. Deterministic per seed.
std::vector<double> synth_fgn(double hurst, std::size_t n, std::uint64_t seed);

/// Autocovariance of unit-variance fGn at lag k.
double fgn_autocovariance(double hurst, std::size_t lag);

/// Weighted least-squares line y = slope * x + intercept. The `*_se` fields
/// treat 1 / w as the known variance of each y; `rss` is the weighted
/// residual sum of squares.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  double rss = 0.0;
};
LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y, std::span<const double> w);

/// Weighted fit of eta_j = slope * j + intercept over octaves [j1, j2] with
/// weights S_j = n ln^2(2) / 2^(j+1); H = (slope + 1) / 2.
///
/// `std_err`, `t_value` and `p_value` follow a weighted regression table:
/// residual-scaled standard error of H, t = H / std_err and a two-sided
/// Student-t p-value with (octaves - 2) degrees of freedom. An exact linear
/// fit has zero std_err. `slope_se_asymptotic` and `intercept_se_asymptotic`
/// instead treat 1 / S_j as the known variance of eta_j.
struct HurstFit {
  double H = 0.5;
  double std_err = 0.0;
  double t_value = 0.0;
  double p_value = 1.0;
  int j1 = 0;
  int j2 = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se_asymptotic = 0.0;
  double intercept_se_asymptotic = 0.0;
};

HurstFit hurst_wls(std::span<const int> octaves, std::span<const double> eta, std::size_t n, int j1, int j2);

/// eta_j = log2 of the mean squared decimated detail coefficient per octave,
/// from a periodic MODWT (n_j = floor(n / 2^j)), with a chi-squared band on
/// n_j degrees of freedom.
struct LogscaleDiagram {
  std::vector<int> octaves;
  std::vector<double> eta;
  std::vector<std::size_t> n_j;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  double fit_slope = 0.0;
  double fit_intercept = 0.0;
  int j1 = 0;
  int j2 = 0;
  HurstFit fit;
};

/// Default octave range [2, 8], with j2 clipped so every octave keeps at
/// least 4 coefficients.
struct OctaveRange {
  int j1 = 2;
  int j2 = 8;
};
OctaveRange clip_octaves(std::size_t n, OctaveRange requested = {});

/// Octaves 1..j2 are reported; the fit uses [j1, j2].
LogscaleDiagram logscale_diagram(std::span<const double> x, int j1, int j2, const std::string& filter = "LA8",
                                 double confidence = 0.95);

/// Affine rewrites of the scaling exponent alpha = slope:
/// H = (1 + alpha) / 2, h = H - 1, D = 2 - h, cf = 2^intercept. Bands use the
/// asymptotic standard errors at the given confidence.
struct ScalingParams {
  double alpha = 0.0, H_lrd = 0.0, h_ss = 0.0, D = 0.0, cf = 0.0;
  double alpha_low = 0.0, alpha_high = 0.0;
  double H_low = 0.0, H_high = 0.0;
  double h_low = 0.0, h_high = 0.0;
  double D_low = 0.0, D_high = 0.0;
  double cf_low = 0.0, cf_high = 0.0;
};

ScalingParams scaling_parameters(const HurstFit& fit, double confidence = 0.95);
/// From a bare exponent and its band; cf is left at zero.
ScalingParams scaling_parameters(double alpha, double alpha_low, double alpha_high);

struct RollingHurstOptions {
  std::size_t window = 260;
  std::size_t step = 24;
  int j1 = 2;
  int j2 = 0;  // 0: min(8, floor(log2(window / 4)))
  std::string filter = "LA8";
};

struct RollingHurstPoint {
  std::size_t anchor = 0;  // last observation of the window
  Date date{};             // set when dates were supplied
  HurstFit fit;
};

std::vector<RollingHurstPoint> rolling_hurst(std::span<const double> x, const RollingHurstOptions& options = {},
                                             std::span<const Date> dates = {});

}  // namespace wavelink
