#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "test_signals.hpp"
#include "wavelink/contagion.hpp"
#include "wavelink/dependence.hpp"
#include "wavelink/error.hpp"

using namespace wavelink;
using wavelink::testing::white_noise;

namespace {

RollingOptions blocks(int levels, std::size_t window) {
  RollingOptions o;
  o.levels = levels;
  o.window = window;
  o.step = window;  // non-overlapping, so the t-test samples are independent
  return o;
}

double mean_of(const std::vector<double>& v, std::size_t from, std::size_t to) {
  return std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(to),
                         0.0) /
         static_cast<double>(to - from);
}

// y independent of x for t < split and equal to x afterwards.
std::vector<double> regime_shift(const std::vector<double>& x, std::uint64_t seed, std::size_t split) {
  auto y = white_noise(x.size(), seed);
  for (std::size_t t = split; t < x.size(); ++t) y[t] = x[t];
  return y;
}

// Sum of slow sinusoids (periods 256-1024) with random phases.
std::vector<double> slow_component(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> s(n, 0.0);
  for (double period : {256.0, 384.0, 640.0, 1024.0}) {
    const auto c = wavelink::testing::sinusoid(n, period, phase(rng), 3.0);
    for (std::size_t t = 0; t < n; ++t) s[t] += c[t];
  }
  return s;
}

}  // namespace

TEST(Rolling, WindowCountAndBounds) {
  const auto x = white_noise(1000, 1), y = white_noise(1000, 2);
  RollingOptions o;
  o.levels = 4;
  o.window = 100;
  o.step = 7;
  const auto r = rolling_wavelet_correlation(x, y, o);
  ASSERT_EQ(r.size(), 4u);
  for (const auto& s : r) {
    EXPECT_EQ(s.rho.size(), (1000u - 100u) / 7u + 1u);
    EXPECT_EQ(s.anchors.front(), 99u);
    EXPECT_EQ(s.anchors[1], 106u);
    for (double v : s.rho) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
  }
  EXPECT_EQ(r[2].horizon, "4-8 days");
}

TEST(Rolling, FullWindowMatchesFullSample) {
  const auto x = white_noise(512, 3);
  const auto y = wavelink::testing::mix(x, white_noise(512, 4), 0.5, 1.0);
  RollingOptions o;
  o.window = 512;
  o.step = 13;
  const auto r = rolling_wavelet_correlation(x, y, o);
  const auto filter = build_filter("LA8");
  const auto full = wavelet_correlation(modwt(x, 6, filter, BoundaryMode::Reflection),
                                        modwt(y, 6, filter, BoundaryMode::Reflection));
  for (std::size_t j = 0; j < 6; ++j) {
    ASSERT_EQ(r[j].rho.size(), 1u);
    EXPECT_EQ(r[j].rho[0], full.estimate[j]);
  }
}

TEST(Rolling, StationaryPairFluctuatesAroundFullSample) {
  double gap = 0.0;
  constexpr int kSeeds = 10;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const auto x = white_noise(2048, 10 + seed);
    const auto y = wavelink::testing::mix(x, white_noise(2048, 50 + seed), 0.75, 1.0);
    RollingOptions o;
    o.levels = 3;
    o.window = 128;
    o.step = 16;
    const auto r = rolling_wavelet_correlation(x, y, o);
    const auto filter = build_filter("LA8");
    const auto full = wavelet_correlation(modwt(x, 3, filter, BoundaryMode::Reflection),
                                          modwt(y, 3, filter, BoundaryMode::Reflection));
    for (std::size_t j = 0; j < 3; ++j) gap += (mean_of(r[j].rho, 0, r[j].rho.size()) - full.estimate[j]) / (3 * kSeeds);
  }
  EXPECT_LT(std::abs(gap), 0.05);
}

TEST(Rolling, RegimeShiftStepsUpAtFineLevels) {
  const auto x = white_noise(2048, 21);
  const auto y = regime_shift(x, 22, 1024);
  RollingOptions o;
  o.levels = 3;
  o.window = 128;
  o.step = 1;
  const auto r = rolling_wavelet_correlation(x, y, o);
  for (std::size_t j = 0; j < 3; ++j) {
    // Windows ending before the split versus windows starting after it.
    const double before = mean_of(r[j].rho, 0, 1024 - 128);
    const double after = mean_of(r[j].rho, 1024, r[j].rho.size());
    EXPECT_GE(after - before, 0.5) << "level " << j + 1;
  }
}

TEST(Rolling, PropagatesDates) {
  const auto x = white_noise(300, 1), y = white_noise(300, 2);
  std::vector<Date> dates;
  for (int i = 0; i < 300; ++i) dates.push_back(parse_date("2001-01-01") + std::chrono::days(i));
  RollingOptions o;
  o.levels = 2;
  o.window = 64;
  o.step = 50;
  const auto r = rolling_wavelet_correlation(x, y, o, dates);
  ASSERT_EQ(r[0].anchor_dates.size(), r[0].rho.size());
  EXPECT_EQ(format_date(r[0].anchor_dates[0]), "2001-03-05");
  EXPECT_THROW(rolling_wavelet_correlation(x, y, o, std::span(dates).first(10)), Error);
}

TEST(Rolling, RejectsShortWindowAndBadStep) {
  const auto x = white_noise(1024, 1), y = white_noise(1024, 2);
  RollingOptions o;
  o.window = 250;  // 6 levels need 256
  EXPECT_THROW(rolling_wavelet_correlation(x, y, o), Error);
  o.window = 256;
  o.step = 0;
  EXPECT_THROW(rolling_wavelet_correlation(x, y, o), Error);
  o.step = 1;
  o.window = 2048;
  EXPECT_THROW(rolling_wavelet_correlation(x, y, o), Error);
}

TEST(Welch, IdenticalSamplesGiveZero) {
  const std::vector<double> a{0.1, 0.3, 0.2, 0.5};
  const auto r = welch_test(a, a);
  EXPECT_EQ(r.t_stat, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_FALSE(r.significant_5pct);
}

TEST(Welch, ReferenceValue) {
  // Hand computation: means 2 and 5, variances 2.5 and 2.5, n = 5 each:
  // t = -3 / sqrt(1) = -3, dof = 8.
  const std::vector<double> a{0, 1, 2, 3, 4}, b{3, 4, 5, 6, 7};
  const auto r = welch_test(a, b);
  EXPECT_NEAR(r.t_stat, -3.0, 1e-14);
  EXPECT_NEAR(r.dof, 8.0, 1e-12);
  EXPECT_NEAR(r.p_value, 0.017071681233782634, 1e-12);  // 2 * pt(-3, 8)
  EXPECT_FALSE(r.significant_1pct);
  EXPECT_TRUE(r.significant_5pct);
}

TEST(Welch, AntisymmetryAndLocationInvariance) {
  const auto a = white_noise(40, 1, 0.1), b = white_noise(55, 2, 0.2);
  const auto ab = welch_test(a, b), ba = welch_test(b, a);
  EXPECT_EQ(ab.t_stat, -ba.t_stat);
  EXPECT_EQ(ab.p_value, ba.p_value);
  auto a2 = a, b2 = b;
  for (auto& v : a2) v += 0.25;
  for (auto& v : b2) v += 0.25;
  EXPECT_NEAR(welch_test(a2, b2).t_stat, ab.t_stat, 1e-10);
}

TEST(Welch, DegenerateVariance) {
  const std::vector<double> a{0.25, 0.25, 0.25}, b{0.75, 0.75};
  const auto r = welch_test(a, b);
  EXPECT_TRUE(std::isinf(r.t_stat));
  EXPECT_LT(r.t_stat, 0.0);
  EXPECT_EQ(r.p_value, 0.0);
  EXPECT_TRUE(r.significant_1pct);
  const std::vector<double> one{0.25};
  EXPECT_THROW(welch_test(one, b), Error);
}

TEST(EventTest, SplitsByAnchor) {
  RollingCorrSeries s;
  s.level = 1;
  for (std::size_t a = 10; a < 30; ++a) {
    s.anchors.push_back(a);
    s.rho.push_back(a < 20 ? 0.0 + 0.01 * static_cast<double>(a % 3) : 0.8 + 0.01 * static_cast<double>(a % 2));
  }
  const auto r = event_ttest(s, 20, 5, 4);
  EXPECT_EQ(r.n_before, 5u);  // anchors 15..19
  EXPECT_EQ(r.n_after, 4u);   // anchors 20..23
  EXPECT_LT(r.t_stat, 0.0);
  EXPECT_TRUE(r.significant_1pct);
  EXPECT_THROW(event_ttest(s, 11, 1, 4), Error);
}

TEST(EventTest, RegimeShiftRejectsAtFineLevels) {
  const auto x = white_noise(2048, 31);
  const auto y = regime_shift(x, 32, 1024);
  const auto r = rolling_wavelet_correlation(x, y, blocks(3, 64));
  for (const auto& s : r) {
    const auto t = event_ttest(s, 1024, 512, 512);
    EXPECT_TRUE(t.significant_1pct) << s.horizon;
    EXPECT_TRUE(t.significant_5pct);
  }
}

TEST(EventTest, SizeNearNominalOnStationaryPairs) {
  int rejections = 0, tests = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto x = white_noise(2048, 2000 + seed);
    const auto y = wavelink::testing::mix(x, white_noise(2048, 3000 + seed), 0.5, 1.0);
    const auto r = rolling_wavelet_correlation(x, y, blocks(1, 64));
    const auto t = event_ttest(r[0], 1024, 512, 512);
    rejections += t.significant_5pct;
    ++tests;
  }
  const double rate = static_cast<double>(rejections) / tests;
  EXPECT_GE(rate, 0.01);
  EXPECT_LE(rate, 0.10);
}

TEST(EventTest, CoarseOnlyLinkageDoesNotTriggerFineLevels) {
  // x and y share a slow component only after the split; fine levels carry
  // independent noise throughout.
  int rejections = 0, tests = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 2048;
    const auto common = slow_component(n, 10 * seed + 1);
    const auto other = slow_component(n, 10 * seed + 2);
    auto x = white_noise(n, 5000 + seed), y = white_noise(n, 6000 + seed);
    for (std::size_t t = 0; t < n; ++t) {
      x[t] += common[t];
      y[t] += t < 1024 ? other[t] : common[t];
    }
    const auto r = rolling_wavelet_correlation(x, y, blocks(3, 64));
    for (int j = 0; j < 2; ++j) {
      rejections += event_ttest(r[static_cast<std::size_t>(j)], 1024, 512, 512).significant_5pct;
      ++tests;
    }
  }
  EXPECT_LE(static_cast<double>(rejections) / tests, 0.10);
}
