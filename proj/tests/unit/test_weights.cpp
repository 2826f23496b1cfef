#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "mstrend/error.hpp"
#include "mstrend/weights.hpp"
#include "oracles.hpp"

using namespace mstrend;

TEST(MomentSum, FirstMomentVanishesAtSymmetricInteriorPoint) {
  EXPECT_NEAR(moment_sum(100, 0.5, 0.1, 1), 0.0, 1e-15);
}

TEST(MomentSum, MatchesDirectSummation) {
  // T = 10, u = 0.5, h = 0.25: t = 3..7 fall in the window.
  double expected = 0.0;
  for (int t = 3; t <= 7; ++t) expected += oracle::epanechnikov((t / 10.0 - 0.5) / 0.25);
  expected /= 10.0 * 0.25;
  EXPECT_NEAR(moment_sum(10, 0.5, 0.25, 0), expected, 1e-14);
}

TEST(MomentSum, EmptyWindowIsZero) { EXPECT_EQ(moment_sum(100, 2.0, 0.1, 0), 0.0); }

TEST(Weights, MatchOracleEntrywise) {
  const auto w = local_linear_weights(10, 0.5, 0.3);
  const auto ref = oracle::weights(10, 0.5, 0.3);
  const auto dense = w.dense();
  ASSERT_EQ(dense.size(), ref.size());
  for (std::size_t t = 0; t < ref.size(); ++t) EXPECT_NEAR(dense[t], ref[t], 1e-12) << t;
}

TEST(Weights, GridPointAgreesWithRealArguments) {
  const auto a = local_linear_weights(500, GridPoint{250, 53});
  const auto b = local_linear_weights(500, 0.5, 0.106);
  const auto da = a.dense();
  const auto db = b.dense();
  for (std::size_t t = 0; t < da.size(); ++t) EXPECT_NEAR(da[t], db[t], 1e-12);
}

TEST(Weights, SumZeroUnitNormOnRandomConfigurations) {
  std::mt19937_64 gen(7);
  int checked = 0;
  while (checked < 1000) {
    const std::size_t T = std::uniform_int_distribution<std::size_t>(20, 800)(gen);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
    const double h = std::uniform_real_distribution<double>(2.5 / T, 0.4999)(gen);
    WeightVector w;
    try {
      w = local_linear_weights(T, u, h);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DegenerateWindow);
      continue;
    }
    double sum = 0.0, abs_sum = 0.0, sq = 0.0;
    for (double v : w.band) {
      sum += v;
      abs_sum += std::abs(v);
      sq += v * v;
    }
    EXPECT_LE(std::abs(sum), 1e-10 * abs_sum);
    EXPECT_NEAR(sq, 1.0, 1e-10);
    for (std::size_t t = 1; t <= T; ++t) {
      if (std::abs(static_cast<double>(t) / T - u) > h) EXPECT_EQ(w.at(t), 0.0);
    }
    ++checked;
  }
}

TEST(Weights, InteriorSignProperty) {
  const std::size_t T = 200;
  for (std::int64_t h_num : {3, 8, 23, 48}) {
    const auto w = local_linear_weights(T, GridPoint{100, h_num});
    for (std::size_t t = 1; t <= T; ++t) {
      const double x = (static_cast<double>(t) - 100.0) / static_cast<double>(h_num);
      EXPECT_GE(w.at(t) * x, -1e-15);
    }
  }
}

TEST(Weights, ShiftInvariance) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> z;
  std::vector<double> y(300), y_shift(300);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = z(gen);
    y_shift[i] = y[i] + 7.5;
  }
  const auto w = local_linear_weights(300, 0.1, 0.2);
  EXPECT_NEAR(w.dot(y), w.dot(y_shift), 1e-12);
}

TEST(Weights, Errors) {
  EXPECT_THROW(local_linear_weights(100, 0.5, 0.0), Error);
  EXPECT_THROW(local_linear_weights(100, 0.5, 0.6), Error);
  try {
    local_linear_weights(100, 5.0, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateWindow);
  }
  // A window holding a single design point.
  EXPECT_THROW(local_linear_weights(100, 0.5, 0.005), Error);
  const auto w = local_linear_weights(100, 0.5, 0.1);
  std::vector<double> short_y(99, 1.0);
  EXPECT_THROW(w.dot(short_y), Error);
}

TEST(Weights, HalfBandwidthAccepted) {
  const auto w = local_linear_weights(100, GridPoint{50, 50});
  double sq = 0.0;
  for (double v : w.band) sq += v * v;
  EXPECT_NEAR(sq, 1.0, 1e-12);
}

TEST(WeightTable, DefaultGridHasNoDroppedPoints) {
  const auto grid = LocationScaleGrid::default_grid(500);
  const auto table = build_weight_table(grid);
  EXPECT_EQ(table.size() + table.dropped().size(), grid.size());
  EXPECT_TRUE(table.dropped().empty());
  EXPECT_DOUBLE_EQ(table[table.smallest_bandwidth_index()].h, grid.h_min());
}

TEST(WeightTable, SinglePoint) {
  const auto grid = LocationScaleGrid::unchecked(100, {{50, 25}});
  EXPECT_EQ(build_weight_table(grid).size(), 1u);
}

TEST(WeightTable, AllPointsOffSupport) {
  const auto grid = LocationScaleGrid::unchecked(100, {{500, 10}});
  try {
    build_weight_table(grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyTable);
  }
}

TEST(WeightTable, DropsDegenerateAndKeepsOrder) {
  const auto grid = LocationScaleGrid::unchecked(100, {{50, 10}, {500, 10}, {30, 20}});
  const auto table = build_weight_table(grid);
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(table[0].point, (GridPoint{50, 10}));
  EXPECT_EQ(table[1].point, (GridPoint{30, 20}));
  ASSERT_EQ(table.dropped().size(), 1u);
  EXPECT_EQ(table.dropped()[0].point, (GridPoint{500, 10}));
}

TEST(WeightTable, IndependentOfWorkerCount) {
  const auto grid = LocationScaleGrid::default_grid(200);
  const auto a = build_weight_table(grid, default_kernel(), 1);
  const auto b = build_weight_table(grid, default_kernel(), 8);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].point, b[i].point);
    EXPECT_EQ(a[i].weights.band, b[i].weights.band);
  }
}
