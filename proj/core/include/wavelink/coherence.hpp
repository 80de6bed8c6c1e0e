#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "wavelink/cwt.hpp"

namespace wavelink {

/// Smoothing operator for coherence: a Gaussian in time with standard
/// deviation `time_factor` * scale, then a boxcar `scale_width` octaves wide.
/// `enabled = false` skips both, which makes R^2 identically 1.
struct SmoothingSpec {
  bool enabled = true;
  double time_factor = 1.0;
  double scale_width = 0.6;
};

/// Row-major [scale][time] coherence grid.
struct CoherenceField {
  std::vector<double> scales;
  std::vector<double> periods;
  std::size_t n_times = 0;
  std::vector<double> r2;
  std::vector<double> phase;
  std::vector<double> coi;
  std::vector<std::uint8_t> sig_mask;  // empty until significance is applied
  std::vector<double> thresholds;      // per scale, empty until significance is applied
  int n_surrogates = 0;

  std::size_t n_scales() const { return scales.size(); }
  std::size_t index(std::size_t scale, std::size_t time) const { return scale * n_times + time; }
  bool in_coi(std::size_t scale, std::size_t time) const { return scales[scale] <= coi[time]; }
};

CoherenceField wavelet_coherence(std::span<const double> x, std::span<const double> y, const MorletParams& params,
                                 const SmoothingSpec& smoothing = {});

/// Largest |R^2 - 1| over the grid with smoothing disabled. Zero up to
/// rounding, since unsmoothed coherence carries no information.
double unsmoothed_coherence_gap(std::span<const double> x, std::span<const double> y, const MorletParams& params);

enum class PhaseRelation { InPhaseXLeads, InPhaseYLeads, AntiPhaseYLeads, AntiPhaseXLeads };

struct PhaseClass {
  PhaseRelation relation;
  bool on_boundary;  // angle is exactly 0, +-pi/2 or +-pi
};

/// Quadrant of a cross-wavelet phase angle, each interval closed on the left.
PhaseClass phase_classify(double phi);
std::string_view to_string(PhaseRelation relation);

struct Ar1Params {
  double phi = 0.0;
  double sigma = 1.0;
};

/// Lag-1 autocorrelation clamped to [0, 0.999]; sigma^2 = var(x) (1 - phi^2).
Ar1Params ar1_fit(std::span<const double> x);
std::vector<double> ar1_simulate(const Ar1Params& params, std::size_t n, std::mt19937_64& rng);

struct SignificanceOptions {
  int n_surrogates = 300;
  double quantile = 0.95;
  std::uint64_t seed = 0;
  /// One threshold per cell instead of per scale. Memory grows with
  /// n_surrogates * cells and is capped by `per_cell_memory_limit` bytes.
  bool per_cell = false;
  std::size_t per_cell_memory_limit = std::size_t{1} << 30;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SignificanceResult {
  std::vector<double> thresholds;       // per scale
  std::vector<double> cell_thresholds;  // per cell, per_cell mode only
  std::vector<std::uint8_t> sig_mask;   // observed R^2 > threshold
  int n_surrogates = 0;
};

/// AR(1) red-noise Monte Carlo test of `observed`, which must come from
/// wavelet_coherence(x, y, params, smoothing). Surrogate i draws from a
/// generator seeded by (seed, i), so results do not depend on thread count.
/// Per-scale thresholds pool surrogate R^2 over cells inside the cone of
/// influence (all times when a scale has none).
SignificanceResult significance_montecarlo(std::span<const double> x, std::span<const double> y,
                                           const MorletParams& params, const SmoothingSpec& smoothing,
                                           const CoherenceField& observed, const SignificanceOptions& options = {});

void apply_significance(CoherenceField& field, const SignificanceResult& result);

}  // namespace wavelink
