#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "test_signals.hpp"
#include "wavelink/error.hpp"
#include "wavelink/stats.hpp"

namespace wavelink {
namespace {

TEST(StatsTest, StandardNormalShapeOverSeeds) {
  // Each of 50 seeds must land inside the stated bands.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto x = testing::white_noise(4096, 1000 + seed);
    const auto s = describe(x);
    ASSERT_TRUE(s.skewness && s.excess_kurtosis);
    EXPECT_LT(std::abs(*s.skewness), 0.15) << "seed " << seed;
    EXPECT_LT(std::abs(*s.excess_kurtosis), 0.3) << "seed " << seed;
    EXPECT_EQ(s.count, 4096u);
  }
}

TEST(StatsTest, AlternatingSeries) {
  std::vector<double> x;
  for (int i = 0; i < 10; ++i) x.push_back(i % 2 == 0 ? -1.0 : 1.0);
  const auto s = describe(x, "alt");
  EXPECT_NEAR(s.mean, 0.0, 1e-15);
  EXPECT_NEAR(s.std_dev, std::sqrt(10.0 / 9.0), 1e-14);
  EXPECT_DOUBLE_EQ(s.min, -1.0);
  EXPECT_DOUBLE_EQ(s.max, 1.0);
  EXPECT_DOUBLE_EQ(s.median, 0.0);
  EXPECT_NEAR(*s.skewness, 0.0, 1e-14);
}

TEST(StatsTest, ZeroVarianceLeavesShapeUndefined) {
  const std::vector<double> x(20, 2.0);
  const auto s = describe(x);
  EXPECT_DOUBLE_EQ(s.std_dev, 0.0);
  EXPECT_FALSE(s.skewness.has_value());
  EXPECT_FALSE(s.excess_kurtosis.has_value());
  EXPECT_FALSE(s.jarque_bera.has_value());
}

TEST(StatsTest, TooShortThrows) {
  EXPECT_THROW(describe(std::vector<double>{1, 2, 3}), Error);
}

TEST(StatsTest, OrderingInvariants) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = describe(testing::white_noise(57, seed));
    EXPECT_LE(s.min, s.median);
    EXPECT_LE(s.median, s.max);
    EXPECT_GE(s.std_dev, 0.0);
    EXPECT_GE(*s.jarque_bera, 0.0);
  }
}

TEST(StatsTest, JarqueBeraShrinksOnNormalQuantileGrid) {
  boost::math::normal_distribution<> normal;
  double previous = 1e300;
  for (std::size_t n : {256u, 1024u, 4096u}) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
      x[i] = boost::math::quantile(normal, (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    const double jb = *describe(x).jarque_bera;
    EXPECT_LT(jb, previous) << "n = " << n;
    previous = jb;
  }
}

TEST(StatsTest, PanelStatsPermuteWithSeries) {
  Panel p;
  for (int d = 0; d < 40; ++d) p.dates.push_back(parse_date("2020-01-01") + std::chrono::days{d});
  p.names = {"a", "b", "c"};
  p.values = {testing::white_noise(40, 1), testing::white_noise(40, 2), testing::white_noise(40, 3)};
  Panel q = p;
  std::swap(q.names[0], q.names[2]);
  std::swap(q.values[0], q.values[2]);
  const auto sp = descriptive_stats(p), sq = descriptive_stats(q);
  EXPECT_EQ(sp[0].name, sq[2].name);
  EXPECT_EQ(sp[0].mean, sq[2].mean);
  EXPECT_EQ(*sp[0].excess_kurtosis, *sq[2].excess_kurtosis);
  EXPECT_EQ(sp[1].jarque_bera, sq[1].jarque_bera);
}

TEST(StatsTest, QuantileAndAutocorrelation) {
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4, 5}, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({1, 2}, 1.0), 2.0);
  const std::vector<double> alt{1, -1, 1, -1, 1, -1, 1, -1};
  EXPECT_NEAR(autocorrelation(alt, 1), -7.0 / 8.0, 1e-15);
}

}  // namespace
}  // namespace wavelink
