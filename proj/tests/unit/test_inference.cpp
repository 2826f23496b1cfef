#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mstrend/error.hpp"
#include "mstrend/inference.hpp"
#include "oracles.hpp"

using namespace mstrend;

namespace {

std::vector<double> white(std::size_t T, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::vector<double> y(T);
  for (double& v : y) v = z(gen);
  return y;
}

PointStatistics stats_for(double psi, double sigma, double lambda) {
  return {psi, std::abs(psi / sigma) - lambda, psi / sigma - lambda, -psi / sigma - lambda};
}

}  // namespace

TEST(RejectionSets, AllBelowThresholdIsEmpty) {
  const std::vector<GridPoint> pts{{50, 10}, {20, 5}};
  const std::vector<PointStatistics> st{stats_for(0.1, 1, 1), stats_for(-0.2, 1, 1)};
  for (const auto& s : rejection_sets(pts, st, 1.0, 100)) EXPECT_TRUE(s.intervals.empty());
}

TEST(RejectionSets, BoundaryExclusion) {
  const std::vector<GridPoint> pts{{5, 8}, {50, 8}};
  const std::vector<PointStatistics> st{stats_for(5.0, 1, 1), stats_for(-5.0, 1, 1)};
  const auto sets = rejection_sets(pts, st, 1.0, 100);
  EXPECT_EQ(sets[0].intervals.size(), 2u);
  EXPECT_TRUE(sets[1].intervals.empty());
  ASSERT_EQ(sets[2].intervals.size(), 1u);
  EXPECT_EQ(sets[2].intervals[0].index, 1u);
  EXPECT_DOUBLE_EQ(sets[2].intervals[0].statistic, 4.0);
  EXPECT_EQ(sets[0].kind, SetKind::Both);
  EXPECT_EQ(sets[1].kind, SetKind::Increase);
}

TEST(RejectionSets, MatchesPredicateOracle) {
  std::mt19937_64 gen(41);
  std::normal_distribution<double> z(0.0, 3.0);
  const std::size_t T = 60;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<GridPoint> pts;
    std::vector<PointStatistics> st;
    for (int i = 0; i < 15; ++i) {
      const std::int64_t u = std::uniform_int_distribution<std::int64_t>(1, 60)(gen);
      const std::int64_t h = std::uniform_int_distribution<std::int64_t>(2, 29)(gen);
      pts.push_back({u, h});
      st.push_back(stats_for(z(gen), 1.0, oracle::lambda(h / 60.0)));
    }
    const double q = 1.0;
    const auto sets = rejection_sets(pts, st, q, T);
    std::vector<std::size_t> both, inc, dec;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double lam = oracle::lambda(pts[i].h_num / 60.0);
      const double x = st[i].psi;
      const bool inside = pts[i].u_num - pts[i].h_num >= 0 && pts[i].u_num + pts[i].h_num <= 60;
      if (std::abs(x) - lam > q) both.push_back(i);
      if (x - lam > q && inside) inc.push_back(i);
      if (-x - lam > q && inside) dec.push_back(i);
    }
    auto idx = [](const IntervalSet& s) {
      std::vector<std::size_t> out;
      for (const auto& r : s.intervals) out.push_back(r.index);
      return out;
    };
    EXPECT_EQ(idx(sets[0]), both);
    EXPECT_EQ(idx(sets[1]), inc);
    EXPECT_EQ(idx(sets[2]), dec);
  }
}

TEST(RunTest, OutcomeInvariants) {
  const std::size_t T = 300;
  std::vector<double> y = white(T, 2);
  for (std::size_t t = 0; t < T; ++t) y[t] += 4.0 * std::max(0.0, (t + 1.0) / T - 0.5);
  const auto grid = LocationScaleGrid::default_grid(T);
  const QuantileConfig qcfg{.n_sims = 300, .seed = 5, .alphas = {0.05}};
  const auto out = run_test(y, 0.05, grid, ArMethod{.p = 1}, qcfg);
  EXPECT_EQ(out.reject, out.statistic > out.critical_value);
  EXPECT_TRUE(out.reject);
  EXPECT_TRUE(out.sign_threshold_positive);
  EXPECT_TRUE(out.ar_fit.has_value());
  EXPECT_EQ(out.points.size(), out.stats.size());
  EXPECT_DOUBLE_EQ(out.h_min, grid.h_min());
  auto in_both = [&](std::size_t index) {
    for (const auto& r : out.set(SetKind::Both).intervals)
      if (r.index == index) return true;
    return false;
  };
  for (SetKind k : {SetKind::Increase, SetKind::Decrease}) {
    for (const auto& r : out.set(k).intervals) EXPECT_TRUE(in_both(r.index));
  }
  for (const auto& a : out.set(SetKind::Increase).intervals)
    for (const auto& b : out.set(SetKind::Decrease).intervals) EXPECT_NE(a.index, b.index);
  for (std::size_t k = 0; k < 3; ++k) {
    for (const auto& m : out.minimal[k]) {
      for (const auto& r : out.sets[k].intervals) EXPECT_FALSE(m.interval.strictly_contains(r.interval));
    }
  }
  EXPECT_FALSE(out.minimal_set(SetKind::Increase).empty());
  EXPECT_TRUE(out.set(SetKind::Decrease).intervals.empty());
}

TEST(RunTest, ShiftInvariance) {
  const std::size_t T = 200;
  const auto y = white(T, 3);
  std::vector<double> y5(y);
  for (double& v : y5) v += 5.0;
  const auto grid = LocationScaleGrid::default_grid(T);
  const QuantileConfig qcfg{.n_sims = 200, .seed = 1};
  const auto a = run_test(y, 0.05, grid, FixedVariance{1.0}, qcfg);
  const auto b = run_test(y5, 0.05, grid, FixedVariance{1.0}, qcfg);
  EXPECT_NEAR(a.statistic, b.statistic, 1e-12);
  EXPECT_EQ(a.critical_value, b.critical_value);
  EXPECT_EQ(a.reject, b.reject);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(a.sets[k].intervals.size(), b.sets[k].intervals.size());
}

TEST(RunTest, LevelWithKnownVariance) {
  const std::size_t T = 250, S = 1000;
  const auto grid = LocationScaleGrid::default_grid(T);
  const PreparedTest prepared(grid, QuantileConfig{.n_sims = 1000, .seed = 11, .alphas = {0.05, 0.10}});
  const std::vector<double> alphas{0.05, 0.10};
  std::vector<int> rejections(2, 0);
  for (std::size_t s = 0; s < S; ++s) {
    const auto d = prepared.decide(white(T, 20000 + s), alphas, 1.0);
    for (std::size_t k = 0; k < 2; ++k) rejections[k] += d[k];
  }
  // The critical value is itself a Monte Carlo estimate; 4 binomial standard
  // errors absorb both sources.
  for (std::size_t k = 0; k < 2; ++k) {
    const double rate = static_cast<double>(rejections[k]) / S;
    const double se = std::sqrt(alphas[k] * (1 - alphas[k]) / S);
    EXPECT_NEAR(rate, alphas[k], 4 * se) << alphas[k];
  }
}

TEST(RunTest, DecideAgreesWithEvaluate) {
  const std::size_t T = 150;
  const PreparedTest prepared(LocationScaleGrid::default_grid(T), QuantileConfig{.n_sims = 200, .seed = 2});
  const std::vector<double> alphas{0.01, 0.05, 0.10};
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto y = white(T, s);
    for (std::size_t t = 0; t < T; ++t) y[t] += 0.02 * s * t / 10.0;
    const auto d = prepared.decide(y, alphas, 1.0);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(d[k], prepared.evaluate(y, alphas[k], 1.0).reject);
  }
}

TEST(LrvEstimate, Methods) {
  const auto y = white(300, 4);
  EXPECT_DOUBLE_EQ(estimate_long_run_variance(y, FixedVariance{2.0}).sigma2, 2.0);
  const auto ar = estimate_long_run_variance(y, ArMethod{.p = 0, .p_max = 3});
  EXPECT_TRUE(ar.order_selection.has_value());
  EXPECT_TRUE(ar.ar_fit.has_value());
  EXPECT_NEAR(estimate_long_run_variance(y, HacConfig{}).sigma2, hac_estimate(y, HacConfig{}), 0);
  EXPECT_THROW(estimate_long_run_variance(y, FixedVariance{0.0}), Error);
  std::vector<double> c(300, 1.0);
  EXPECT_THROW(estimate_long_run_variance(c, HacConfig{}), Error);
  EXPECT_EQ(describe(FixedVariance{2.0}).empty(), false);
}
