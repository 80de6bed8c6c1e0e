#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "wavelink/error.hpp"
#include "wavelink/panel.hpp"

namespace wavelink {
namespace {

namespace fs = std::filesystem;

class PanelFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("wavelink_panel_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& body) {
    auto p = dir_ / name;
    std::ofstream(p) << body;
    return p;
  }

  static std::string dated_rows(int count, int first_day, double start, double step) {
    std::string out;
    for (int i = 0; i < count; ++i) {
      out += format_date(parse_date("2021-03-01") + std::chrono::days{first_day + i}) + "," +
             std::to_string(start + step * i) + "\n";
    }
    return out;
  }

  fs::path dir_;
};

CsvFormat relaxed() {
  CsvFormat f;
  f.min_observations = 2;
  return f;
}

TEST(DateTest, ParseAndFormat) {
  EXPECT_EQ(format_date(parse_date("1997-07-01")), "1997-07-01");
  EXPECT_THROW(parse_date("1997-02-30"), Error);
  EXPECT_THROW(parse_date("01-07-1997"), Error);
}

TEST_F(PanelFileTest, SingleSeriesTenPrices) {
  const auto path = write("a.csv", "date,px\n" + dated_rows(10, 0, 100.0, 1.0));
  const auto p = load_panel(path, relaxed());
  EXPECT_EQ(p.n_series(), 1u);
  EXPECT_EQ(p.n_obs(), 10u);
  EXPECT_EQ(p.names[0], "px");
  EXPECT_DOUBLE_EQ(p.values[0][9], 109.0);
}

TEST_F(PanelFileTest, TwoFilesAlignOnDateIntersection) {
  const auto a = write("a.csv", "date,a\n" + dated_rows(10, 0, 1.0, 1.0));
  const auto b = write("b.csv", "date,b\n" + dated_rows(10, 2, 5.0, 1.0));
  std::vector<fs::path> paths{a, b};
  const auto p = load_panels(paths, relaxed());
  EXPECT_EQ(p.n_series(), 2u);
  EXPECT_EQ(p.n_obs(), 8u);
  EXPECT_EQ(format_date(p.dates.front()), "2021-03-03");
  EXPECT_DOUBLE_EQ(p.values[0][0], 3.0);
  EXPECT_DOUBLE_EQ(p.values[1][0], 5.0);
}

TEST_F(PanelFileTest, ForwardFillIsOptIn) {
  const auto path = write("gap.csv",
                          "date,a,b\n2021-01-01,1,10\n2021-01-02,2,\n2021-01-03,3,30\n2021-01-04,,40\n");
  const auto dropped = load_panel(path, relaxed());
  EXPECT_EQ(dropped.n_obs(), 2u);
  auto fmt = relaxed();
  fmt.missing = MissingPolicy::ForwardFill;
  const auto filled = load_panel(path, fmt);
  ASSERT_EQ(filled.n_obs(), 4u);
  EXPECT_DOUBLE_EQ(filled.values[1][1], 10.0);
  EXPECT_DOUBLE_EQ(filled.values[0][3], 3.0);
}

TEST_F(PanelFileTest, NonNumericCellNamesLine) {
  const auto path = write("bad.csv", "date,a\n2021-01-01,1\n2021-01-02,abc\n2021-01-03,3\n");
  try {
    load_panel(path, relaxed());
    FAIL() << "expected parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
}

TEST_F(PanelFileTest, MissingFileAndColumn) {
  EXPECT_THROW(load_panel(dir_ / "nope.csv"), Error);
  const auto path = write("x.csv", "day,a\n2021-01-01,1\n");
  EXPECT_THROW(load_panel(path, relaxed()), Error);
}

TEST_F(PanelFileTest, TooFewObservations) {
  const auto path = write("short.csv", "date,a\n" + dated_rows(31, 0, 1.0, 1.0));
  try {
    load_panel(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
  const auto ok = write("ok.csv", "date,a\n" + dated_rows(32, 0, 1.0, 1.0));
  EXPECT_EQ(load_panel(ok).n_obs(), 32u);
}

TEST_F(PanelFileTest, LongLayout) {
  const auto path = write("long.csv",
                          "date,name,value\n2021-01-01,x,1\n2021-01-01,y,2\n2021-01-02,x,3\n"
                          "2021-01-02,y,4\n2021-01-03,x,5\n");
  auto fmt = relaxed();
  fmt.layout = CsvLayout::Long;
  const auto p = load_panel(path, fmt);
  EXPECT_EQ(p.n_series(), 2u);
  EXPECT_EQ(p.n_obs(), 2u);
  EXPECT_DOUBLE_EQ(p.values[p.index_of("y")][1], 4.0);
}

Panel make_prices(std::vector<double> px) {
  Panel p;
  p.names = {"p"};
  for (std::size_t i = 0; i < px.size(); ++i) p.dates.push_back(parse_date("2020-01-01") + std::chrono::days{i});
  p.values = {std::move(px)};
  return p;
}

TEST(LogReturnsTest, Examples) {
  const double e = std::exp(1.0);
  auto r = log_returns(make_prices({1.0, e, e * e}));
  ASSERT_EQ(r.n_obs(), 2u);
  EXPECT_NEAR(r.values[0][0], 1.0, 1e-15);
  EXPECT_NEAR(r.values[0][1], 1.0, 1e-15);
  r = log_returns(make_prices({5, 5, 5}));
  EXPECT_EQ(r.values[0], (std::vector<double>{0.0, 0.0}));
  r = log_returns(make_prices({100, 105}));
  EXPECT_NEAR(r.values[0][0], 0.04879016416943205, 1e-15);
}

TEST(LogReturnsTest, NonPositivePriceNamesSeriesAndDate) {
  try {
    log_returns(make_prices({1.0, 0.0, 2.0}));
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("'p'"), std::string::npos);
    EXPECT_NE(msg.find("2020-01-02"), std::string::npos);
  }
}

TEST(LogReturnsTest, RecoversReturnsFromCumulatedPrices) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> d(0.0, 0.02);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> r(200), px{1.0};
    double acc = 0.0;
    for (auto& v : r) {
      v = d(rng);
      acc += v;
      px.push_back(std::exp(acc));
    }
    const auto back = log_returns(make_prices(px));
    for (std::size_t t = 0; t < r.size(); ++t) ASSERT_NEAR(back.values[0][t], r[t], 1e-12);
  }
}

}  // namespace
}  // namespace wavelink
