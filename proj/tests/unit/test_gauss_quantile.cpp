#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mstrend/error.hpp"
#include "mstrend/gauss_quantile.hpp"
#include "mstrend/multiscale.hpp"
#include "mstrend/normal.hpp"
#include "mstrend/rng.hpp"

using namespace mstrend;

TEST(OrderStatistic, CeilingRule) {
  std::vector<double> s(100);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(i + 1);
  // ceil(0.95 * 100) = 95 even though 0.95 * 100 is not exact in binary.
  EXPECT_EQ(upper_order_statistic(s, 0.05), 95.0);
  EXPECT_EQ(upper_order_statistic(s, 0.10), 90.0);
  EXPECT_EQ(upper_order_statistic(s, 0.01), 99.0);
  EXPECT_EQ(upper_order_statistic(s, 0.999), 1.0);
  std::vector<double> odd{1, 2, 3, 4, 5, 6, 7};
  EXPECT_EQ(upper_order_statistic(odd, 0.5), 4.0);  // ceil(3.5) = 4
}

TEST(QuantileConfig, Validation) {
  QuantileConfig c;
  EXPECT_NO_THROW(c.validate());
  c.n_sims = 99;
  EXPECT_THROW(c.validate(), Error);
  c.n_sims = 1000;
  c.alphas = {0.0};
  EXPECT_THROW(c.validate(), Error);
  c.alphas = {1.0};
  EXPECT_THROW(c.validate(), Error);
}

TEST(GaussianDraw, ZeroNoiseGivesMinusLargestBandwidthCorrection) {
  const auto grid = LocationScaleGrid::default_grid(200);
  const auto table = build_weight_table(grid);
  std::vector<double> z(200, 0.0);
  EXPECT_DOUBLE_EQ(gaussian_statistic_draw(table, z), -lambda_correction(grid.h_max()));
}

TEST(CriticalValues, SinglePointHalfBandwidthIsAbsoluteNormal) {
  const auto table = build_weight_table(LocationScaleGrid::unchecked(100, {{50, 50}}));
  QuantileConfig cfg{.n_sims = 10000, .seed = 3, .alphas = {0.05}};
  const auto cv = simulate_critical_values(table, cfg, 2);
  EXPECT_NEAR(cv.quantile(0.05), 1.96, 0.06);

  // Each draw is |N(0,1)|: KS distance against the half-normal law.
  const auto sorted = cv.sorted_draws();
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = 2.0 * normal_cdf(sorted[i]) - 1.0;
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  EXPECT_LT(d, 1.63 / std::sqrt(n));
}

TEST(CriticalValues, DecreasingInAlpha) {
  const auto table = build_weight_table(LocationScaleGrid::default_grid(150));
  QuantileConfig cfg{.n_sims = 500, .seed = 1, .alphas = {0.10, 0.01, 0.05, 0.05}};
  const auto cv = simulate_critical_values(table, cfg);
  const auto q = cv.quantiles();
  ASSERT_EQ(q.size(), 3u);
  EXPECT_DOUBLE_EQ(q[0].first, 0.01);
  EXPECT_GE(q[0].second, q[1].second);
  EXPECT_GE(q[1].second, q[2].second);
  for (double a = 0.01; a < 0.99; a += 0.01) EXPECT_GE(cv.quantile(a), cv.quantile(a + 0.01));
}

TEST(CriticalValues, IndependentOfWorkerCount) {
  const auto table = build_weight_table(LocationScaleGrid::default_grid(120));
  QuantileConfig cfg{.n_sims = 300, .seed = 17};
  const auto a = simulate_critical_values(table, cfg, 1);
  const auto b = simulate_critical_values(table, cfg, 8);
  ASSERT_EQ(a.draws().size(), b.draws().size());
  EXPECT_TRUE(std::equal(a.draws().begin(), a.draws().end(), b.draws().begin()));
}

TEST(CriticalValues, DrawsUseDocumentedStreams) {
  const auto table = build_weight_table(LocationScaleGrid::default_grid(100));
  QuantileConfig cfg{.n_sims = 100, .seed = 9};
  const auto cv = simulate_critical_values(table, cfg);
  for (std::uint64_t i : {0ull, 37ull, 99ull}) {
    NormalStream s(9, stream_id(StreamTag::GaussianReference, i));
    std::vector<double> z(100);
    s.fill(z);
    EXPECT_DOUBLE_EQ(cv.draws()[i], gaussian_statistic_draw(table, z));
  }
}

TEST(CriticalValues, SigmaCancels) {
  // Scaling the noise and the standard deviation together leaves every draw fixed.
  const auto table = build_weight_table(LocationScaleGrid::default_grid(100));
  NormalStream s(4, 0);
  std::vector<double> z(100), z3(100);
  s.fill(z);
  for (std::size_t i = 0; i < z.size(); ++i) z3[i] = 3.0 * z[i];
  EXPECT_NEAR(gaussian_statistic_draw(table, z), multiscale_statistic(z3, table, 3.0).statistic, 1e-12);
}
