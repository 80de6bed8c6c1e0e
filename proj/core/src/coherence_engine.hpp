#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cwt_plan.hpp"
#include "wavelink/coherence.hpp"

namespace wavelink::detail {

// Coherence for a fixed length, Morlet grid and smoothing operator. Kernel
// spectra and edge normalizers are built once; compute() is const and safe to
// call from several threads.
class CoherenceEngine {
 public:
  CoherenceEngine(std::size_t n, const MorletParams& params, const SmoothingSpec& smoothing);

  const std::vector<double>& scales() const { return plan_.scales(); }
  std::size_t n() const { return plan_.n(); }

  // `phase` may be null when only R^2 is needed.
  void compute(std::span<const double> x, std::span<const double> y, std::vector<double>& r2,
               std::vector<double>* phase) const;

 private:
  struct ScaleWeights {
    std::size_t first;
    std::vector<double> w;  // normalized to sum 1
  };

  void smooth_time(std::size_t j, std::vector<std::complex<double>>& row) const;

  CwtPlan plan_;
  SmoothingSpec smoothing_;
  std::size_t padded_ = 0;
  std::vector<std::vector<double>> kernel_spectrum_;
  std::vector<std::vector<double>> normalizer_;
  std::vector<ScaleWeights> scale_weights_;
};

}  // namespace wavelink::detail
