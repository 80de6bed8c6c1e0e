#pragma once

#include <complex>
#include <span>
#include <vector>

#include "wavelink/cwt.hpp"

namespace wavelink::detail {

// Precomputed Morlet daughters in the frequency domain for one series length,
// reusable across many transforms (the Monte Carlo loop).
class CwtPlan {
 public:
  CwtPlan(std::size_t n, const MorletParams& params);

  std::size_t n() const { return n_; }
  const std::vector<double>& scales() const { return scales_; }
  const MorletParams& params() const { return params_; }

  // Row-major [scale][time] coefficients of the mean-removed series.
  void transform(std::span<const double> x, std::vector<std::complex<double>>& out) const;

 private:
  std::size_t n_;
  std::size_t padded_;
  MorletParams params_;
  std::vector<double> scales_;
  // Nonzero band of each daughter: first bin and values.
  std::vector<std::size_t> band_start_;
  std::vector<std::vector<double>> band_;
};

}  // namespace wavelink::detail
