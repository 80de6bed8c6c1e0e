#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wavelink/modwt.hpp"

namespace wavelink {

/// Investment-horizon label of a MODWT level, "2^{j-1}-2^j days".
std::string horizon_label(int level);

/// Per-level estimate with a two-sided confidence band.
struct ScaleProfile {
  std::vector<int> levels;
  std::vector<std::string> horizon_labels;
  std::vector<double> estimate;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<std::size_t> effective_n;

  std::size_t size() const { return levels.size(); }
};

/// sigma^2(j) = (1/N_j) sum of squared kept coefficients. The band uses the
/// chi-squared approximation with max(N_j / 2^j, 1) degrees of freedom.
ScaleProfile wavelet_variance(const Decomposition& dec, double confidence = 0.95);

/// Scale-by-scale covariance (1/N_j normalization, coefficients centered on
/// their kept-sample means). No confidence band; ci_low == ci_high == estimate.
ScaleProfile wavelet_covariance(const Decomposition& a, const Decomposition& b);

/// Covariance of the two level-J smooths (1/n normalization). Together with
/// wavelet_covariance it splits the sample covariance of a periodic pair.
double smooth_covariance(const Decomposition& a, const Decomposition& b);

/// Correlation of kept level-j coefficients with a Fisher-z band. Level-j
/// coefficients are correlated over about 2^j lags, so the band uses
/// N_j / 2^j effective samples; `effective_n` still reports N_j.
ScaleProfile wavelet_correlation(const Decomposition& a, const Decomposition& b, double confidence = 0.95);

/// rho_tau(j) = Cov(a_j(k), b_j(k + tau)) / (sd_a(j) sd_b(j)).
///
/// The lagged covariance is summed over overlapping kept pairs and divided by
/// the full level count, so |rho| <= 1. A peak at tau > 0 means `a` leads `b`.
struct CrossCorrProfile {
  int level = 0;
  std::vector<int> lags;
  std::vector<double> rho;
  std::vector<double> ci_low;
  std::vector<double> ci_high;

  /// Lag of the largest rho; ties go to the smallest |tau|, then negative.
  int peak_lag() const;
  double at(int lag) const;
};

std::vector<CrossCorrProfile> wavelet_cross_correlation(const Decomposition& a, const Decomposition& b,
                                                        int max_lag, double confidence = 0.95);

/// Wavelet multiple (cross-)correlation.
///
/// At each level every series is regressed (OLS with intercept) on all the
/// others; phi is the square root of the largest R^2 and `leader_index` the
/// regressand attaining it. For WMCC the leader's coefficients are shifted by
/// tau (leader at k + tau against the others at k) and the lag fields are
/// filled, indexed [level][lag].
struct WmcProfile {
  std::vector<int> levels;
  std::vector<std::string> horizon_labels;
  std::vector<double> phi;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<std::size_t> leader_index;

  std::vector<int> lags;
  std::vector<std::vector<double>> phi_by_lag;
  std::vector<std::vector<double>> ci_low_by_lag;
  std::vector<std::vector<double>> ci_high_by_lag;
  std::vector<int> best_lag;
};

WmcProfile wmc(std::span<const Decomposition> decs, double confidence = 0.95);
WmcProfile wmcc(std::span<const Decomposition> decs, int max_lag, double confidence = 0.95);

struct LeaderRow {
  int level = 0;
  std::string horizon;
  std::string leader;
  double phi = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// The phi band reaches zero, so the leader is not distinguishable.
  bool low_confidence = false;
};

std::vector<LeaderRow> scale_leader_table(std::span<const Decomposition> decs, std::span<const std::string> names,
                                          double confidence = 0.95);

}  // namespace wavelink
