#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "test_signals.hpp"
#include "wavelink/dependence.hpp"
#include "wavelink/error.hpp"

using namespace wavelink;
using wavelink::testing::white_noise;

namespace {

const FilterPair& la8() {
  static const FilterPair f = build_filter("LA8");
  return f;
}

Decomposition decompose(const std::vector<double>& x, int levels = 6, BoundaryMode mode = BoundaryMode::Brickwall) {
  return modwt(x, levels, la8(), mode);
}

std::vector<double> scaled(std::vector<double> x, double c) {
  for (auto& v : x) v *= c;
  return x;
}

// Independent oracle: textbook two-pass Pearson correlation.
double pearson_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> kept(const Decomposition& d, int j) {
  std::vector<double> out;
  const auto c = d.detail(j);
  const auto m = d.mask(j);
  for (std::size_t k = 0; k < c.size(); ++k)
    if (m[k]) out.push_back(c[k]);
  return out;
}

}  // namespace

TEST(HorizonLabel, DyadicBands) {
  EXPECT_EQ(horizon_label(1), "1-2 days");
  EXPECT_EQ(horizon_label(2), "2-4 days");
  EXPECT_EQ(horizon_label(6), "32-64 days");
}

TEST(WaveletVariance, ZeroSeriesIsZero) {
  const auto p = wavelet_variance(decompose(std::vector<double>(512, 0.0)));
  ASSERT_EQ(p.size(), 6u);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p.estimate[i], 0.0);
}

TEST(WaveletVariance, PeriodicEnergySplitsSampleVariance) {
  const auto x = white_noise(2048, 11);
  const auto dec = decompose(x, 6, BoundaryMode::Periodic);
  const auto p = wavelet_variance(dec);
  double total = std::accumulate(p.estimate.begin(), p.estimate.end(), 0.0);
  const double ms = std::accumulate(dec.smooth.begin(), dec.smooth.end(), 0.0) / 2048.0;
  for (double v : dec.smooth) total += (v - ms) * (v - ms) / 2048.0;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / 2048.0;
  double var = 0.0;
  for (double v : x) var += (v - mx) * (v - mx) / 2048.0;
  EXPECT_NEAR(total, var, 1e-10 * var);
}

TEST(WaveletVariance, HomogeneousOfDegreeTwo) {
  const auto x = white_noise(1024, 3);
  const auto a = wavelet_variance(decompose(x));
  const auto b = wavelet_variance(decompose(scaled(x, 2.0)));
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(b.estimate[i], 4.0 * a.estimate[i], 1e-12 * b.estimate[i]);
    EXPECT_LT(a.ci_low[i], a.estimate[i]);
    EXPECT_GT(a.ci_high[i], a.estimate[i]);
  }
}

TEST(WaveletVariance, UsesBrickwallCounts) {
  const auto p = wavelet_variance(decompose(white_noise(4096, 1)));
  const std::vector<std::size_t> expected{4089, 4075, 4047, 3991, 3879, 3655};
  EXPECT_EQ(p.effective_n, expected);
}

TEST(WaveletVariance, RejectsLevelsWithoutKeptCoefficients) {
  // n = 64 at level 4 under brickwall: L_4 - 1 = 105 > 64.
  EXPECT_THROW(wavelet_variance(decompose(white_noise(64, 1), 4)), Error);
}

TEST(WaveletCorrelation, SelfAndSignFlip) {
  const auto x = white_noise(4096, 5);
  const auto d = decompose(x);
  const auto self = wavelet_correlation(d, d);
  const auto flip = wavelet_correlation(d, decompose(scaled(x, -1.0)));
  for (std::size_t i = 0; i < self.size(); ++i) {
    EXPECT_NEAR(self.estimate[i], 1.0, 1e-12);
    EXPECT_NEAR(flip.estimate[i], -1.0, 1e-12);
  }
}

TEST(WaveletCorrelation, MatchesPearsonOnKeptCoefficients) {
  const auto x = white_noise(2048, 7);
  const auto y = wavelink::testing::mix(x, white_noise(2048, 8), 0.6, 0.8);
  const auto dx = decompose(x), dy = decompose(y);
  const auto p = wavelet_correlation(dx, dy);
  for (int j = 1; j <= 6; ++j) {
    EXPECT_NEAR(p.estimate[j - 1], pearson_oracle(kept(dx, j), kept(dy, j)), 1e-12);
    EXPECT_LE(-1.0, p.ci_low[j - 1]);
    EXPECT_LE(p.ci_low[j - 1], p.estimate[j - 1]);
    EXPECT_LE(p.estimate[j - 1], p.ci_high[j - 1]);
    EXPECT_LE(p.ci_high[j - 1], 1.0);
  }
}

TEST(WaveletCorrelation, SymmetricAndScaleInvariant) {
  const auto x = white_noise(2048, 21);
  const auto y = wavelink::testing::mix(x, white_noise(2048, 22), 0.3, 1.0);
  const auto dx = decompose(x), dy = decompose(y);
  const auto ab = wavelet_correlation(dx, dy);
  const auto ba = wavelet_correlation(dy, dx);
  const auto scaled_ab = wavelet_correlation(decompose(scaled(x, 37.5)), decompose(scaled(y, 0.01)));
  for (std::size_t i = 0; i < ab.size(); ++i) {
    EXPECT_EQ(ab.estimate[i], ba.estimate[i]);
    EXPECT_NEAR(ab.estimate[i], scaled_ab.estimate[i], 1e-12);
  }
}

TEST(WaveletCorrelation, MismatchedDecompositionsThrow) {
  const auto x = white_noise(1024, 1);
  EXPECT_THROW(wavelet_correlation(decompose(x, 5), decompose(x, 6)), Error);
  EXPECT_THROW(wavelet_correlation(decompose(x), decompose(x, 6, BoundaryMode::Periodic)), Error);
  const std::vector<double> shorter(x.begin(), x.begin() + 900);
  EXPECT_THROW(wavelet_correlation(decompose(x), decompose(shorter)), Error);
}

TEST(WaveletCorrelation, ZeroVarianceThrows) {
  const auto x = white_noise(1024, 1);
  EXPECT_THROW(wavelet_correlation(decompose(x), decompose(std::vector<double>(1024, 2.0))), Error);
}

TEST(WaveletCorrelation, IndependentNoiseCoverage) {
  int inside = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto p = wavelet_correlation(decompose(white_noise(4096, 1000 + seed)),
                                       decompose(white_noise(4096, 5000 + seed)));
    for (std::size_t i = 0; i < p.size(); ++i) {
      ++total;
      if (p.ci_low[i] <= 0.0 && 0.0 <= p.ci_high[i]) ++inside;
    }
  }
  EXPECT_GE(static_cast<double>(inside) / total, 0.90);
}

TEST(WaveletCovariance, PeriodicSumMatchesSampleCovariance) {
  const auto x = white_noise(4096, 31);
  auto y = wavelink::testing::mix(x, white_noise(4096, 32), 0.7, 0.5);
  for (auto& v : y) v += 3.0;
  const auto dx = decompose(x, 6, BoundaryMode::Periodic), dy = decompose(y, 6, BoundaryMode::Periodic);
  const auto cov = wavelet_covariance(dx, dy);
  const double total = std::accumulate(cov.estimate.begin(), cov.estimate.end(), 0.0) + smooth_covariance(dx, dy);
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / 4096.0;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / 4096.0;
  double sample = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) sample += (x[t] - mx) * (y[t] - my);
  sample /= 4096.0;
  EXPECT_LE(std::abs(total - sample) / std::abs(sample), 1e-8);
}

TEST(CrossCorrelation, ZeroLagMatchesCorrelation) {
  const auto x = white_noise(2048, 41);
  const auto y = wavelink::testing::mix(x, white_noise(2048, 42), 0.5, 1.0);
  const auto dx = decompose(x), dy = decompose(y);
  const auto corr = wavelet_correlation(dx, dy);
  const auto cc = wavelet_cross_correlation(dx, dy, 10);
  ASSERT_EQ(cc.size(), 6u);
  for (std::size_t i = 0; i < cc.size(); ++i) {
    EXPECT_EQ(cc[i].lags.size(), 21u);
    EXPECT_NEAR(cc[i].at(0), corr.estimate[i], 1e-12);
    for (double r : cc[i].rho) EXPECT_LE(std::abs(r), 1.0);
  }
}

TEST(CrossCorrelation, ReflectionIdentity) {
  const auto x = white_noise(2048, 51);
  const auto y = wavelink::testing::moving_average(white_noise(2048, 52), 3);
  const auto dx = decompose(x), dy = decompose(y);
  const auto ab = wavelet_cross_correlation(dx, dy, 12);
  const auto ba = wavelet_cross_correlation(dy, dx, 12);
  for (std::size_t i = 0; i < ab.size(); ++i)
    for (int tau = -12; tau <= 12; ++tau) EXPECT_NEAR(ab[i].at(tau), ba[i].at(-tau), 1e-12);
}

TEST(CrossCorrelation, RecoversFiveStepLead) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    // Band-limited driver with most energy at periods of 4-16 samples.
    const auto raw = white_noise(4096, 600 + seed);
    const auto smooth = wavelink::testing::moving_average(raw, 2);
    const auto x = wavelink::testing::mix(smooth, wavelink::testing::moving_average(raw, 8), 1.0, -1.0);
    const auto y = wavelink::testing::circular_shift(x, 5);
    const auto cc = wavelet_cross_correlation(decompose(x), decompose(y), 10);
    for (int j = 1; j <= 3; ++j) EXPECT_EQ(cc[j - 1].peak_lag(), 5) << "seed " << seed << " level " << j;
  }
}

TEST(CrossCorrelation, IndependentNoiseCoverage) {
  int inside = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto cc = wavelet_cross_correlation(decompose(white_noise(4096, 70 + seed)),
                                              decompose(white_noise(4096, 170 + seed)), 8);
    for (const auto& prof : cc)
      for (std::size_t i = 0; i < prof.lags.size(); ++i) {
        ++total;
        if (prof.ci_low[i] <= 0.0 && 0.0 <= prof.ci_high[i]) ++inside;
      }
  }
  EXPECT_GE(static_cast<double>(inside) / total, 0.90);
}

TEST(CrossCorrelation, LagBoundEnforced) {
  const auto x = white_noise(256, 1);
  const auto d = decompose(x, 3);
  EXPECT_THROW(wavelet_cross_correlation(d, d, 200), Error);
  EXPECT_THROW(wavelet_cross_correlation(d, d, -1), Error);
}

TEST(CrossCorrelation, PeakTieBreaksTowardSmallLag) {
  CrossCorrProfile p;
  p.lags = {-2, -1, 0, 1, 2};
  p.rho = {0.5, 0.9, 0.1, 0.9, 0.5};
  EXPECT_EQ(p.peak_lag(), -1);
  p.rho = {0.9, 0.2, 0.1, 0.2, 0.9};
  EXPECT_EQ(p.peak_lag(), -2);
}

namespace {

std::vector<std::vector<double>> leader_panel(std::uint64_t seed, std::size_t n, int others, double noise,
                                              std::size_t lag = 0) {
  std::vector<std::vector<double>> panel(static_cast<std::size_t>(others) + 1);
  std::vector<double> avg(n, 0.0);
  for (int i = 1; i <= others; ++i) {
    panel[static_cast<std::size_t>(i)] = white_noise(n, seed * 31 + static_cast<std::uint64_t>(i));
    for (std::size_t t = 0; t < n; ++t) avg[t] += panel[static_cast<std::size_t>(i)][t] / others;
  }
  const auto e = white_noise(n, seed * 31 + 99, noise);
  const auto lagged = wavelink::testing::circular_shift(avg, lag);
  panel[0].resize(n);
  for (std::size_t t = 0; t < n; ++t) panel[0][t] = lagged[t] + e[t];
  return panel;
}

std::vector<Decomposition> decompose_all(const std::vector<std::vector<double>>& panel, int levels,
                                         BoundaryMode mode = BoundaryMode::Brickwall) {
  std::vector<Decomposition> out;
  for (const auto& s : panel) out.push_back(decompose(s, levels, mode));
  return out;
}

}  // namespace

TEST(Wmc, ConstructedLeaderAtEveryLevel) {
  const auto decs = decompose_all(leader_panel(1, 4096, 4, 0.01), 8);
  const auto p = wmc(decs);
  ASSERT_EQ(p.levels.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(p.leader_index[i], 0u);
    EXPECT_GE(p.phi[i], 0.99);
    EXPECT_LE(p.phi[i], 1.0);
  }
  const std::vector<std::string> names{"lead", "a", "b", "c", "d"};
  const auto table = scale_leader_table(decs, names);
  for (const auto& row : table) {
    EXPECT_EQ(row.leader, "lead");
    EXPECT_FALSE(row.low_confidence);
  }
}

TEST(Wmc, TwoSeriesEqualsAbsolutePairwiseCorrelation) {
  const auto x = white_noise(2048, 81);
  const auto y = wavelink::testing::mix(x, white_noise(2048, 82), -0.4, 1.0);
  const std::vector<Decomposition> decs{decompose(x), decompose(y)};
  const auto p = wmc(decs);
  const auto r = wavelet_correlation(decs[0], decs[1]);
  for (std::size_t i = 0; i < p.levels.size(); ++i) {
    EXPECT_NEAR(p.phi[i], std::abs(r.estimate[i]), 1e-10);
    EXPECT_EQ(p.leader_index[i], 0u);  // identical R^2, lower index wins
  }
}

TEST(Wmc, BoundedByOneAndLargestPairwiseCorrelation) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto base = white_noise(2048, 900 + seed);
    std::vector<std::vector<double>> panel;
    for (int i = 0; i < 4; ++i)
      panel.push_back(wavelink::testing::mix(base, white_noise(2048, 950 + seed * 7 + i), 0.3 * i, 1.0));
    const auto decs = decompose_all(panel, 6);
    const auto p = wmc(decs);
    for (std::size_t li = 0; li < p.levels.size(); ++li) {
      double best_pair = 0.0;
      for (std::size_t a = 0; a < decs.size(); ++a)
        for (std::size_t b = a + 1; b < decs.size(); ++b)
          best_pair = std::max(best_pair, std::abs(wavelet_correlation(decs[a], decs[b]).estimate[li]));
      EXPECT_LE(p.phi[li], 1.0);
      EXPECT_GE(p.phi[li], best_pair - 1e-9);
      EXPECT_LE(p.ci_low[li], p.phi[li]);
      EXPECT_GE(p.ci_high[li], p.phi[li]);
    }
  }
}

TEST(Wmc, MatchesOlsWithInterceptOracle) {
  // Independent oracle: normal equations for the leader regression at level 2.
  const auto decs = decompose_all(leader_panel(3, 1024, 3, 0.5), 4);
  const auto p = wmc(decs);
  const int j = 2;
  std::vector<std::vector<double>> cols;
  for (const auto& d : decs) cols.push_back(kept(d, j));
  const std::size_t leader = p.leader_index[j - 1];
  const std::size_t m = cols[0].size();
  // Design: intercept plus the other series; solve by Gaussian elimination.
  std::vector<std::size_t> regs;
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (i != leader) regs.push_back(i);
  const std::size_t q = regs.size() + 1;
  std::vector<std::vector<double>> a(q, std::vector<double>(q + 1, 0.0));
  auto reg = [&](std::size_t c, std::size_t k) { return c == 0 ? 1.0 : cols[regs[c - 1]][k]; };
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t r = 0; r < q; ++r) {
      for (std::size_t c = 0; c < q; ++c) a[r][c] += reg(r, k) * reg(c, k);
      a[r][q] += reg(r, k) * cols[leader][k];
    }
  for (std::size_t piv = 0; piv < q; ++piv)
    for (std::size_t r = 0; r < q; ++r) {
      if (r == piv) continue;
      const double f = a[r][piv] / a[piv][piv];
      for (std::size_t c = piv; c <= q; ++c) a[r][c] -= f * a[piv][c];
    }
  const double my = std::accumulate(cols[leader].begin(), cols[leader].end(), 0.0) / static_cast<double>(m);
  double sse = 0.0, sst = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double fit = 0.0;
    for (std::size_t c = 0; c < q; ++c) fit += a[c][q] / a[c][c] * reg(c, k);
    sse += (cols[leader][k] - fit) * (cols[leader][k] - fit);
    sst += (cols[leader][k] - my) * (cols[leader][k] - my);
  }
  EXPECT_NEAR(p.phi[j - 1], std::sqrt(1.0 - sse / sst), 1e-10);
}

TEST(Wmc, IndependentPanelLowConfidenceAtFineLevels) {
  int flagged = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<std::vector<double>> panel;
    for (int i = 0; i < 3; ++i) panel.push_back(white_noise(2048, 4000 + seed * 5 + i));
    const auto decs = decompose_all(panel, 4);
    const auto p = wmc(decs);
    EXPECT_LT(p.phi[0], 0.15);
    const std::vector<std::string> names{"a", "b", "c"};
    const auto rows = scale_leader_table(decs, names);
    EXPECT_EQ(rows.size(), 4u);
    if (rows[0].low_confidence) ++flagged;
  }
  EXPECT_GE(flagged, 14);
}

TEST(Wmc, CollinearPanelNamesLevel) {
  const auto x = white_noise(1024, 1), y = white_noise(1024, 2);
  std::vector<double> z(1024);
  for (std::size_t t = 0; t < z.size(); ++t) z[t] = 2.0 * x[t] - y[t];
  const auto decs = decompose_all({x, y, z}, 3);
  try {
    wmc(decs);
    FAIL() << "expected a singularity error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Numerical);
    EXPECT_NE(std::string(e.what()).find("level 1"), std::string::npos);
  }
}

TEST(Wmc, RejectsSingleSeries) {
  const std::vector<Decomposition> one{decompose(white_noise(512, 1), 3)};
  EXPECT_THROW(wmc(one), Error);
}

TEST(Wmcc, ZeroLagSliceMatchesWmc) {
  const auto decs = decompose_all(leader_panel(5, 2048, 3, 0.3), 6);
  const auto base = wmc(decs);
  const auto lagged = wmcc(decs, 6);
  ASSERT_EQ(lagged.lags.size(), 13u);
  for (std::size_t i = 0; i < base.levels.size(); ++i) {
    EXPECT_EQ(lagged.leader_index[i], base.leader_index[i]);
    EXPECT_NEAR(lagged.phi_by_lag[i][6], base.phi[i], 1e-12);
  }
}

TEST(Wmcc, RecoversThreeStepLead) {
  // Leader is the panel mean three steps later: leader(k + 3) ~ others(k).
  const auto panel = leader_panel(7, 4096, 3, 0.05, 3);
  std::vector<std::vector<double>> smoothed;
  for (const auto& s : panel) smoothed.push_back(wavelink::testing::moving_average(s, 4));
  const auto p = wmcc(decompose_all(smoothed, 6), 8);
  int checked = 0;
  for (std::size_t i = 0; i < p.levels.size(); ++i) {
    if (p.leader_index[i] != 0) continue;
    ++checked;
    EXPECT_EQ(p.best_lag[i], 3) << "level " << p.levels[i];
  }
  EXPECT_GE(checked, 3);
}

TEST(Wmcc, ExchangeablePanelIsSymmetricInLag) {
  constexpr int kSeeds = 40, kLag = 4;
  std::vector<double> diff(kLag, 0.0);
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::vector<std::vector<double>> panel;
    for (int i = 0; i < 3; ++i) panel.push_back(white_noise(2048, 7000 + static_cast<std::uint64_t>(seed) * 3 + i));
    const auto p = wmcc(decompose_all(panel, 3), kLag);
    for (int tau = 1; tau <= kLag; ++tau)
      diff[tau - 1] += (p.phi_by_lag[0][kLag + tau] - p.phi_by_lag[0][kLag - tau]) / kSeeds;
  }
  for (double d : diff) EXPECT_LT(std::abs(d), 0.02);
}
