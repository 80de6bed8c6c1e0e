#include "wavelink/dependence.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "distributions.hpp"
#include "wavelink/error.hpp"

namespace wavelink {
namespace {

void require_compatible(const Decomposition& a, const Decomposition& b) {
  require(a.length() == b.length() && a.levels == b.levels && a.filter.name == b.filter.name &&
              a.boundary == b.boundary,
          ErrorCode::InvalidArgument,
          "decompositions differ in length, level count, filter or boundary mode");
}

void require_compatible(std::span<const Decomposition> decs) {
  for (std::size_t i = 1; i < decs.size(); ++i) require_compatible(decs[0], decs[i]);
}

std::vector<std::size_t> kept_indices(const Decomposition& dec, int level) {
  const auto mask = dec.mask(level);
  std::vector<std::size_t> idx;
  idx.reserve(mask.size());
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (mask[k]) idx.push_back(k);
  require(!idx.empty(), ErrorCode::InsufficientData,
          "level " + std::to_string(level) + " has no coefficients outside the boundary region");
  return idx;
}

double kept_mean(std::span<const double> d, const std::vector<std::size_t>& idx) {
  double s = 0.0;
  for (auto k : idx) s += d[k];
  return s / static_cast<double>(idx.size());
}

struct PairMoments {
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  std::size_t n = 0;
};

PairMoments centred_moments(std::span<const double> a, std::span<const double> b,
                            const std::vector<std::size_t>& idx) {
  const double ma = kept_mean(a, idx), mb = kept_mean(b, idx);
  PairMoments m;
  m.n = idx.size();
  for (auto k : idx) {
    const double da = a[k] - ma, db = b[k] - mb;
    m.saa += da * da;
    m.sbb += db * db;
    m.sab += da * db;
  }
  return m;
}

double correlation_from(const PairMoments& m, int level) {
  require(m.saa > 0.0 && m.sbb > 0.0, ErrorCode::Numerical,
          "zero wavelet variance at level " + std::to_string(level));
  return std::clamp(m.sab / std::sqrt(m.saa * m.sbb), -1.0, 1.0);
}

ScaleProfile empty_profile(int levels) {
  ScaleProfile p;
  for (int j = 1; j <= levels; ++j) {
    p.levels.push_back(j);
    p.horizon_labels.push_back(horizon_label(j));
  }
  return p;
}

// R^2 of each column regressed with intercept on all other columns, from the
// inverse of the sample correlation matrix: R_i^2 = 1 - 1 / (C^{-1})_{ii}.
std::vector<double> multiple_r2(const Eigen::MatrixXd& rows, int level) {
  const Eigen::Index p = rows.cols();
  const Eigen::RowVectorXd mu = rows.colwise().mean();
  const Eigen::MatrixXd centred = rows.rowwise() - mu;
  Eigen::MatrixXd cov = centred.transpose() * centred;
  const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
  for (Eigen::Index i = 0; i < p; ++i)
    require(sd(i) > 0.0, ErrorCode::Numerical,
            "zero wavelet variance in series " + std::to_string(i) + " at level " + std::to_string(level));
  const Eigen::MatrixXd corr = sd.cwiseInverse().asDiagonal() * cov * sd.cwiseInverse().asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
  const double min_ev = eig.eigenvalues().minCoeff();
  const double max_ev = eig.eigenvalues().maxCoeff();
  require(min_ev > 1e-12 * max_ev, ErrorCode::Numerical,
          "singular regressor matrix at level " + std::to_string(level) + " (collinear series)");
  const Eigen::MatrixXd inv =
      eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();

  std::vector<double> r2(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) r2[static_cast<std::size_t>(i)] = std::clamp(1.0 - 1.0 / inv(i, i), 0.0, 1.0);
  return r2;
}

// Rows pair the leader at k + lag with every other series at k, for kept k
// and kept k + lag.
Eigen::MatrixXd lagged_rows(std::span<const Decomposition> decs, int level, std::size_t leader, int lag) {
  const auto mask = decs[0].mask(level);
  const auto n = static_cast<long>(mask.size());
  std::vector<long> ks;
  for (long k = 0; k < n; ++k) {
    const long kl = k + lag;
    if (kl < 0 || kl >= n) continue;
    if (mask[static_cast<std::size_t>(k)] && mask[static_cast<std::size_t>(kl)]) ks.push_back(k);
  }
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(ks.size()), static_cast<Eigen::Index>(decs.size()));
  for (std::size_t i = 0; i < decs.size(); ++i) {
    const auto d = decs[i].detail(level);
    const long shift = i == leader ? lag : 0;
    for (std::size_t r = 0; r < ks.size(); ++r)
      rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = d[static_cast<std::size_t>(ks[r] + shift)];
  }
  return rows;
}

int best_index_by_small_lag(const std::vector<int>& lags, const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < lags.size(); ++i) {
    if (values[i] > values[best]) {
      best = i;
    } else if (values[i] == values[best]) {
      const int ai = std::abs(lags[i]), ab = std::abs(lags[best]);
      if (ai < ab || (ai == ab && lags[i] < lags[best])) best = i;
    }
  }
  return lags[best];
}

}  // namespace

std::string horizon_label(int level) {
  return std::to_string(1L << (level - 1)) + "-" + std::to_string(1L << level) + " days";
}

ScaleProfile wavelet_variance(const Decomposition& dec, double confidence) {
  detail::normal_two_sided_critical(confidence);  // validates the level
  auto p = empty_profile(dec.levels);
  for (int j = 1; j <= dec.levels; ++j) {
    const auto idx = kept_indices(dec, j);
    require(idx.size() >= 4, ErrorCode::InsufficientData,
            "level " + std::to_string(j) + " has fewer than 4 kept coefficients");
    const auto d = dec.detail(j);
    double ss = 0.0;
    for (auto k : idx) ss += d[k] * d[k];
    const double v = ss / static_cast<double>(idx.size());
    const double edf = std::max(static_cast<double>(idx.size()) / std::pow(2.0, j), 1.0);
    const double alpha = 1.0 - confidence;
    p.estimate.push_back(v);
    p.ci_low.push_back(edf * v / detail::chi_squared_quantile(edf, 1.0 - alpha / 2.0));
    p.ci_high.push_back(edf * v / detail::chi_squared_quantile(edf, alpha / 2.0));
    p.effective_n.push_back(idx.size());
  }
  return p;
}

ScaleProfile wavelet_covariance(const Decomposition& a, const Decomposition& b) {
  require_compatible(a, b);
  auto p = empty_profile(a.levels);
  for (int j = 1; j <= a.levels; ++j) {
    const auto idx = kept_indices(a, j);
    const auto m = centred_moments(a.detail(j), b.detail(j), idx);
    const double c = m.sab / static_cast<double>(m.n);
    p.estimate.push_back(c);
    p.ci_low.push_back(c);
    p.ci_high.push_back(c);
    p.effective_n.push_back(m.n);
  }
  return p;
}

double smooth_covariance(const Decomposition& a, const Decomposition& b) {
  require_compatible(a, b);
  std::vector<std::size_t> all(a.length());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  const auto m = centred_moments(a.smooth, b.smooth, all);
  return m.sab / static_cast<double>(m.n);
}

ScaleProfile wavelet_correlation(const Decomposition& a, const Decomposition& b, double confidence) {
  require_compatible(a, b);
  auto p = empty_profile(a.levels);
  for (int j = 1; j <= a.levels; ++j) {
    const auto idx = kept_indices(a, j);
    const double r = correlation_from(centred_moments(a.detail(j), b.detail(j), idx), j);
    const auto band = detail::fisher_interval(r, static_cast<double>(idx.size()) / std::pow(2.0, j), confidence);
    p.estimate.push_back(r);
    p.ci_low.push_back(band.low);
    p.ci_high.push_back(band.high);
    p.effective_n.push_back(idx.size());
  }
  return p;
}

int CrossCorrProfile::peak_lag() const { return best_index_by_small_lag(lags, rho); }

double CrossCorrProfile::at(int lag) const {
  auto it = std::find(lags.begin(), lags.end(), lag);
  require(it != lags.end(), ErrorCode::InvalidArgument, "lag " + std::to_string(lag) + " not computed");
  return rho[static_cast<std::size_t>(it - lags.begin())];
}

std::vector<CrossCorrProfile> wavelet_cross_correlation(const Decomposition& a, const Decomposition& b, int max_lag,
                                                        double confidence) {
  require_compatible(a, b);
  require(max_lag >= 0, ErrorCode::InvalidArgument, "max lag must be non-negative");
  std::vector<CrossCorrProfile> out;
  for (int j = 1; j <= a.levels; ++j) {
    const auto idx = kept_indices(a, j);
    require(static_cast<std::size_t>(max_lag) * 2 < idx.size(), ErrorCode::InvalidArgument,
            "max lag " + std::to_string(max_lag) + " is not below half the " + std::to_string(idx.size()) +
                " kept coefficients at level " + std::to_string(j));
    const auto da = a.detail(j), db = b.detail(j);
    const auto mask = a.mask(j);
    const auto zero_lag = centred_moments(da, db, idx);
    const double r0 = correlation_from(zero_lag, j);
    const double ma = kept_mean(da, idx), mb = kept_mean(db, idx);
    const double norm = std::sqrt(zero_lag.saa * zero_lag.sbb);
    const long n = static_cast<long>(da.size());

    CrossCorrProfile prof;
    prof.level = j;
    for (int tau = -max_lag; tau <= max_lag; ++tau) {
      double r = r0;
      std::size_t pairs = idx.size();
      if (tau != 0) {
        double s = 0.0;
        pairs = 0;
        for (long k = std::max(0L, -static_cast<long>(tau)); k < n && k + tau < n; ++k) {
          if (!mask[static_cast<std::size_t>(k)] || !mask[static_cast<std::size_t>(k + tau)]) continue;
          s += (da[static_cast<std::size_t>(k)] - ma) * (db[static_cast<std::size_t>(k + tau)] - mb);
          ++pairs;
        }
        r = std::clamp(s / norm, -1.0, 1.0);
      }
      const auto band = detail::fisher_interval(r, static_cast<double>(pairs) / std::pow(2.0, j), confidence);
      prof.lags.push_back(tau);
      prof.rho.push_back(r);
      prof.ci_low.push_back(band.low);
      prof.ci_high.push_back(band.high);
    }
    out.push_back(std::move(prof));
  }
  return out;
}

WmcProfile wmc(std::span<const Decomposition> decs, double confidence) {
  require(decs.size() >= 2, ErrorCode::InvalidArgument, "multiple correlation needs at least 2 series");
  require_compatible(decs);
  detail::normal_two_sided_critical(confidence);
  WmcProfile p;
  for (int j = 1; j <= decs[0].levels; ++j) {
    kept_indices(decs[0], j);
    const auto rows = lagged_rows(decs, j, 0, 0);
    const auto r2 = multiple_r2(rows, j);
    std::size_t leader = 0;
    // Equal R^2 up to rounding (always the case with two series) keeps the
    // lower index.
    for (std::size_t i = 1; i < r2.size(); ++i)
      if (r2[i] > r2[leader] + 1e-12) leader = i;
    const double phi = std::sqrt(r2[leader]);
    const double n_eff = static_cast<double>(rows.rows()) / std::pow(2.0, j);
    const auto band = detail::fisher_interval(phi, n_eff, confidence);
    p.levels.push_back(j);
    p.horizon_labels.push_back(horizon_label(j));
    p.phi.push_back(phi);
    p.ci_low.push_back(band.low);
    p.ci_high.push_back(band.high);
    p.leader_index.push_back(leader);
  }
  return p;
}

WmcProfile wmcc(std::span<const Decomposition> decs, int max_lag, double confidence) {
  require(max_lag >= 0, ErrorCode::InvalidArgument, "max lag must be non-negative");
  WmcProfile p = wmc(decs, confidence);
  for (int tau = -max_lag; tau <= max_lag; ++tau) p.lags.push_back(tau);
  for (std::size_t li = 0; li < p.levels.size(); ++li) {
    const int j = p.levels[li];
    const std::size_t leader = p.leader_index[li];
    require(static_cast<std::size_t>(max_lag) * 2 < kept_indices(decs[0], j).size(), ErrorCode::InvalidArgument,
            "max lag too large for level " + std::to_string(j));
    std::vector<double> phis, lows, highs;
    for (int tau : p.lags) {
      const auto rows = lagged_rows(decs, j, leader, tau);
      const double phi = std::sqrt(multiple_r2(rows, j)[leader]);
      const auto band = detail::fisher_interval(phi, static_cast<double>(rows.rows()) / std::pow(2.0, j), confidence);
      phis.push_back(phi);
      lows.push_back(band.low);
      highs.push_back(band.high);
    }
    p.best_lag.push_back(best_index_by_small_lag(p.lags, phis));
    p.phi_by_lag.push_back(std::move(phis));
    p.ci_low_by_lag.push_back(std::move(lows));
    p.ci_high_by_lag.push_back(std::move(highs));
  }
  return p;
}

std::vector<LeaderRow> scale_leader_table(std::span<const Decomposition> decs, std::span<const std::string> names,
                                          double confidence) {
  require(names.size() == decs.size(), ErrorCode::InvalidArgument, "one name per decomposition required");
  const auto profile = wmc(decs, confidence);
  std::vector<LeaderRow> rows;
  for (std::size_t i = 0; i < profile.levels.size(); ++i) {
    LeaderRow r;
    r.level = profile.levels[i];
    r.horizon = profile.horizon_labels[i];
    r.leader = names[profile.leader_index[i]];
    r.phi = profile.phi[i];
    r.ci_low = profile.ci_low[i];
    r.ci_high = profile.ci_high[i];
    r.low_confidence = r.ci_low <= 0.0;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace wavelink
