#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "mstrend/error.hpp"
#include "mstrend/lrv.hpp"
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

std::vector<double> ar2_path(std::size_t T, double a1, double a2, double nu2, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z(0.0, std::sqrt(nu2));
  const std::size_t burn = 500;
  std::vector<double> e(T + burn, 0.0);
  for (std::size_t t = 2; t < e.size(); ++t) e[t] = a1 * e[t - 1] + a2 * e[t - 2] + z(gen);
  return {e.begin() + burn, e.end()};
}

std::vector<double> diff_cov_oracle(const std::vector<double>& y, std::size_t q, std::size_t L) {
  const std::size_t T = y.size();
  std::vector<double> g(L + 1, 0.0);
  for (std::size_t l = 0; l <= L; ++l) {
    // 1-based t = q + l + 1 .. T.
    for (std::size_t t = q + l + 1; t <= T; ++t) {
      const double d1 = y[t - 1] - y[t - 1 - q];
      const double d2 = y[t - 1 - l] - y[t - 1 - l - q];
      g[l] += d1 * d2;
    }
    g[l] /= static_cast<double>(T - q);
  }
  return g;
}

bool causal_by_eigenvalues(const std::vector<double>& a) {
  const auto p = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = a[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  const Eigen::VectorXcd ev = companion.eigenvalues();
  for (Eigen::Index i = 0; i < p; ++i) {
    if (std::abs(ev(i)) >= 1.0) return false;
  }
  return true;
}

}  // namespace

TEST(DiffAutocovariances, ConstantSeries) {
  std::vector<double> y(50, 2.5);
  for (double g : diff_autocovariances(y, 3, 4).gamma) EXPECT_EQ(g, 0.0);
}

TEST(DiffAutocovariances, LinearTrend) {
  std::vector<double> y(10);
  for (std::size_t t = 0; t < 10; ++t) y[t] = (t + 1) / 10.0;
  EXPECT_NEAR(diff_autocovariances(y, 2, 0).gamma[0], 0.04, 1e-15);
}

TEST(DiffAutocovariances, MatchesDoubleLoop) {
  const auto y = white(300, 1);
  const auto g = diff_autocovariances(y, 5, 12);
  const auto ref = diff_cov_oracle(y, 5, 12);
  for (std::size_t l = 0; l <= 12; ++l) EXPECT_NEAR(g.gamma[l], ref[l], 1e-12);
  EXPECT_EQ(g.at(-3), g.at(3));
}

TEST(DiffAutocovariances, TooShort) {
  std::vector<double> y(10, 1.0);
  EXPECT_THROW(diff_autocovariances(y, 5, 5), Error);
  EXPECT_NO_THROW(diff_autocovariances(y, 5, 4));
}

TEST(DiffAutocovariances, DifferenceIdentityInExpectation) {
  const double a = 0.5, nu2 = 1.0;
  const std::size_t T = 400, q = 4, L = 6, S = 500;
  auto gamma_eps = [&](long l) { return nu2 * std::pow(a, std::abs(l)) / (1 - a * a); };
  std::vector<double> mean(L + 1, 0.0), sq(L + 1, 0.0);
  for (std::size_t s = 0; s < S; ++s) {
    const auto e = oracle::ar1_path(T, a, nu2, 1000 + s);
    const auto g = diff_autocovariances(e, q, L);
    for (std::size_t l = 0; l <= L; ++l) {
      mean[l] += g.gamma[l];
      sq[l] += g.gamma[l] * g.gamma[l];
    }
  }
  for (std::size_t l = 0; l <= L; ++l) {
    const double m = mean[l] / S;
    const double se = std::sqrt((sq[l] / S - m * m) / S);
    const long ll = static_cast<long>(l), qq = static_cast<long>(q);
    // (T - q - l)/(T - q) accounts for the fixed normalization.
    const double truth = (2 * gamma_eps(ll) - gamma_eps(ll - qq) - gamma_eps(ll + qq)) *
                         static_cast<double>(T - q - l) / static_cast<double>(T - q);
    EXPECT_NEAR(m, truth, 3 * se + 1e-12) << "lag " << l;
  }
}

TEST(DiffAutocovariances, TrendShiftIsSmall) {
  const std::size_t T = 2000, q = 25, S = 50;
  double shift = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    const auto e = oracle::ar1_path(T, 0.25, 1.0, 50 + s);
    std::vector<double> y(e);
    for (std::size_t t = 0; t < T; ++t) y[t] += static_cast<double>(t + 1) / T;
    shift += diff_autocovariances(y, q, 3).gamma[0] - diff_autocovariances(e, q, 3).gamma[0];
  }
  EXPECT_LT(std::abs(shift / S), 0.01);
}

TEST(PilotAr, OrderOneIsRatio) {
  const auto y = white(200, 2);
  const auto g = diff_autocovariances(y, 25, 1);
  EXPECT_NEAR(pilot_ar(y, 1, 25)[0], g.gamma[1] / g.gamma[0], 1e-14);
}

TEST(PilotAr, OrderTwoMatchesExplicitInverse) {
  const auto y = ar2_path(800, 0.3, 0.2, 1.0, 3);
  const auto g = diff_cov_oracle(y, 10, 2);
  const double det = g[0] * g[0] - g[1] * g[1];
  const double a1 = (g[0] * g[1] - g[1] * g[2]) / det;
  const double a2 = (g[0] * g[2] - g[1] * g[1]) / det;
  const auto a = pilot_ar(y, 2, 10);
  EXPECT_NEAR(a[0], a1, 1e-10);
  EXPECT_NEAR(a[1], a2, 1e-10);
}

TEST(PilotAr, ConsistentForLongAr1) {
  const auto e = oracle::ar1_path(5000, 0.5, 1.0, 4);
  EXPECT_NEAR(pilot_ar(e, 1, 25)[0], 0.5, 0.05);
}

TEST(PilotAr, OrderChecks) {
  const auto y = white(200, 5);
  EXPECT_THROW(pilot_ar(y, 0, 25), Error);
  EXPECT_THROW(pilot_ar(y, 25, 25), Error);
  try {
    pilot_ar(y, 21, 30);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig);
  }
  std::vector<double> c(200, 1.0);
  try {
    pilot_ar(c, 1, 25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularSystem);
  }
}

TEST(PilotAr, CausalOnRandomizedData) {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> coef(-0.9, 0.9);
  std::uniform_int_distribution<std::size_t> order(1, 4), length(60, 600);
  int checked = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t T = length(gen), p = order(gen);
    std::vector<double> y = oracle::ar1_path(T, coef(gen), 1.0, 5000 + rep);
    const double slope = coef(gen) * 5;
    for (std::size_t t = 0; t < T; ++t) y[t] += slope * static_cast<double>(t) / T;
    const std::size_t q = std::uniform_int_distribution<std::size_t>(p + 1, 30)(gen);
    const auto g = diff_autocovariances(y, q, p);
    ASSERT_GT(g.gamma[0], 0.0);
    const auto a = pilot_ar(y, p, q);
    EXPECT_TRUE(is_causal(a)) << rep;
    EXPECT_TRUE(causal_by_eigenvalues(a)) << rep;
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(MaCoefficients, Examples) {
  const std::vector<double> half{0.5};
  const auto c = ma_coefficients(half, 10);
  for (std::size_t k = 0; k <= 10; ++k) EXPECT_NEAR(c[k], std::pow(0.5, k), 1e-15);
  const std::vector<double> big{0.75};
  EXPECT_LE(ma_coefficients(big, 20)[20], 0.0035);
  EXPECT_NEAR(ma_coefficients(big, 20)[20], std::pow(0.75, 20), 1e-15);
  const std::vector<double> two{0.5, 0.3};
  const auto c2 = ma_coefficients(two, 3);
  EXPECT_DOUBLE_EQ(c2[0], 1.0);
  EXPECT_DOUBLE_EQ(c2[1], 0.5);
  EXPECT_NEAR(c2[2], 0.55, 1e-15);
  EXPECT_NEAR(c2[3], 0.425, 1e-15);
  EXPECT_EQ(ma_coefficients(two, 0).size(), 1u);
}

TEST(MaCoefficients, DecayForCausalModels) {
  // Real characteristic roots: successive ratios settle below one.
  for (const std::vector<double>& a : {std::vector<double>{0.9}, std::vector<double>{0.167, 0.178},
                                       std::vector<double>{-0.6, 0.2}}) {
    ASSERT_TRUE(is_causal(a));
    const auto c = ma_coefficients(a, 101);
    double worst = 0.0;
    for (std::size_t k = 50; k <= 100; ++k) {
      if (c[k] != 0.0) worst = std::max(worst, std::abs(c[k + 1] / c[k]));
    }
    EXPECT_LT(worst, 1.0);
  }
  // Complex roots oscillate through zero, so bound the envelope instead.
  const std::vector<double> osc{1.2, -0.5};
  ASSERT_TRUE(is_causal(osc));
  const auto c = ma_coefficients(osc, 100);
  double early = 0.0, late = 0.0;
  for (std::size_t k = 40; k < 50; ++k) early = std::max(early, std::abs(c[k]));
  for (std::size_t k = 90; k < 100; ++k) late = std::max(late, std::abs(c[k]));
  EXPECT_LT(late, 1e-3 * early);
}

TEST(InnovationVariance, HandComputation) {
  const std::vector<double> y{1.0, 3.0, 2.0, 5.0, 4.0, 4.5};
  const std::vector<double> a{0.5};
  // dy = (2, -1, 3, -1, 0.5); residuals for t = 3..6: -2, 3.5, -2.5, 1.
  const double expected = (4.0 + 12.25 + 6.25 + 1.0) / 12.0;
  EXPECT_NEAR(innovation_variance(y, a), expected, 1e-15);
}

TEST(InnovationVariance, ConstantAndShort) {
  std::vector<double> c(30, 4.0);
  const std::vector<double> a{0.3, 0.1};
  EXPECT_EQ(innovation_variance(c, a), 0.0);
  std::vector<double> short_y(5, 1.0);
  EXPECT_THROW(innovation_variance(short_y, a), Error);
}

TEST(InnovationVariance, WhiteNoiseMean) {
  const std::vector<double> zero{0.0};
  double mean = 0.0;
  for (int s = 0; s < 200; ++s) mean += innovation_variance(white(500, 100 + s), zero);
  EXPECT_NEAR(mean / 200, 1.0, 0.05);
}

TEST(RefinedAr, ScalarFormulaAtOrderOne) {
  const auto y = oracle::ar1_path(300, 0.4, 1.0, 6);
  const std::vector<double> pilot{0.37};
  const auto g = diff_autocovariances(y, 1, 1);
  const double nu2 = 0.8;
  EXPECT_NEAR(refined_ar(y, 1, pilot, nu2, 1)[0], (g.gamma[1] + nu2) / g.gamma[0], 1e-14);
}

TEST(RefinedAr, ZeroInnovationReducesToYuleWalker) {
  const auto y = ar2_path(400, 0.2, 0.1, 1.0, 7);
  const std::vector<double> pilot{0.2, 0.1};
  const auto a = refined_ar(y, 2, pilot, 0.0, 6);
  const auto g = diff_cov_oracle(y, 6, 2);
  const double det = g[0] * g[0] - g[1] * g[1];
  EXPECT_NEAR(a[0], (g[0] * g[1] - g[1] * g[2]) / det, 1e-10);
  EXPECT_NEAR(a[1], (g[0] * g[2] - g[1] * g[1]) / det, 1e-10);
}

TEST(RefinedAr, RemovesTrendBias) {
  const double a1 = 0.25, sd = std::sqrt(1.0 / (1 - a1 * a1));
  const std::size_t T = 500, S = 200;
  double mean_fit = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    auto y = oracle::ar1_path(T, a1, 1.0, 9000 + s);
    for (std::size_t t = 0; t < T; ++t) y[t] += 10.0 * sd * static_cast<double>(t + 1) / T;
    mean_fit += averaged_ar_fit(y, 1).a[0];
  }
  EXPECT_NEAR(mean_fit / S, a1, 0.08);
}

TEST(LongRunMap, Examples) {
  const std::vector<double> half{0.5};
  EXPECT_DOUBLE_EQ(long_run_variance_from_ar(half, 1.0), 4.0);
  const std::vector<double> unit{0.6, 0.4};
  try {
    long_run_variance_from_ar(unit, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ExplosiveFit);
  }
}

TEST(LongRunMap, MatchesAutocovarianceSum) {
  for (double a : {-0.75, -0.5, -0.25, 0.25, 0.5, 0.75}) {
    const long L = 10000;
    double sum = 0.0;
    for (long l = -L; l <= L; ++l) sum += std::pow(a, std::abs(l)) / (1 - a * a);
    const std::vector<double> coef{a};
    EXPECT_NEAR(sum, long_run_variance_from_ar(coef, 1.0), 1e-6);
  }
}

TEST(AveragedFit, InternalConsistency) {
  const auto y = ar2_path(600, 0.167, 0.178, 0.322, 8);
  const auto fit = averaged_ar_fit(y, 2);
  EXPECT_EQ(fit.q, 25u);
  EXPECT_EQ(fit.r_bar, 10u);
  std::vector<double> mean(2, 0.0);
  for (std::size_t r = 1; r <= 10; ++r) {
    const auto ar = refined_ar(y, 2, fit.pilot, fit.nu2_pilot, r);
    mean[0] += ar[0] / 10;
    mean[1] += ar[1] / 10;
  }
  EXPECT_NEAR(fit.a[0], mean[0], 1e-12);
  EXPECT_NEAR(fit.a[1], mean[1], 1e-12);
  EXPECT_NEAR(fit.nu2, innovation_variance(y, fit.a), 1e-15);
  EXPECT_NEAR(fit.sigma2, fit.nu2 / std::pow(1 - fit.a[0] - fit.a[1], 2), 1e-12);
}

TEST(AveragedFit, StrongNegativeDependenceStaysInRange) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto y = oracle::ar1_path(500, -0.95, 1.0, 300 + s);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] += static_cast<double>(t + 1) / 500.0;
    const double a = averaged_ar_fit(y, 1).a[0];
    EXPECT_GT(a, -1.0);
    EXPECT_LT(a, 0.0);
  }
}

TEST(Hac, LagWindows) {
  EXPECT_EQ(lag_window(LagWindow::Bartlett, 0.0), 1.0);
  EXPECT_EQ(lag_window(LagWindow::Bartlett, 1.0), 0.0);
  EXPECT_EQ(lag_window(LagWindow::Bartlett, -1.0), 0.0);
  EXPECT_DOUBLE_EQ(lag_window(LagWindow::Bartlett, 0.25), 0.75);
  EXPECT_EQ(lag_window(LagWindow::Parzen, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(lag_window(LagWindow::Parzen, 0.5), 0.25);
  EXPECT_EQ(lag_window(LagWindow::Parzen, 1.0), 0.0);
  EXPECT_EQ(lag_window(LagWindow::Parzen, 1.5), 0.0);
  EXPECT_EQ(parse_lag_window("Parzen"), LagWindow::Parzen);
  EXPECT_THROW(parse_lag_window("tukey"), Error);
}

TEST(Hac, ConstantIsZeroAndConfigChecked) {
  std::vector<double> c(100, 1.0);
  EXPECT_EQ(hac_estimate(c, HacConfig{}), 0.0);
  EXPECT_THROW(hac_estimate(c, HacConfig{.q = 60, .b = 5}), Error);
  EXPECT_THROW(hac_estimate(c, HacConfig{.q = 5, .b = 5}), Error);
  EXPECT_THROW(hac_estimate(c, HacConfig{.q = 10, .b = 0}), Error);
}

TEST(Hac, DirectFormula) {
  const auto y = white(120, 12);
  const HacConfig cfg{.q = 10, .b = 3, .window = LagWindow::Parzen};
  auto sq = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = lag; t < y.size(); ++t) s += std::pow(y[t] - y[t - lag], 2);
    return s;
  };
  const double T = 120.0;
  const double g0 = sq(10) / (2 * (T - 10));
  double expected = g0;
  for (std::size_t l = 1; l <= 3; ++l) {
    expected += 2 * lag_window(LagWindow::Parzen, l / 3.0) * (g0 - sq(l) / (2 * (T - l)));
  }
  EXPECT_NEAR(hac_estimate(y, cfg), expected, 1e-12);
}

TEST(Hac, WhiteNoiseMean) {
  const HacConfig cfg{.q = 40, .b = 5};
  double mean = 0.0;
  for (int s = 0; s < 200; ++s) mean += hac_estimate(white(2000, 700 + s), cfg);
  EXPECT_NEAR(mean / 200, 1.0, 0.15);
}

TEST(OracleAr1, Estimates) {
  EXPECT_NEAR(oracle_ar1(oracle::ar1_path(5000, 0.5, 1.0, 13)).a, 0.5, 0.03);
  EXPECT_NEAR(oracle_ar1(white(5000, 14)).a, 0.0, 0.05);
  const auto fit = oracle_ar1(oracle::ar1_path(2000, 0.3, 2.0, 15));
  EXPECT_NEAR(fit.nu2, 2.0, 0.2);
  EXPECT_NEAR(fit.sigma2, fit.nu2 / std::pow(1 - fit.a, 2), 1e-12);
}

TEST(OracleAr1, AlternatingSequenceIsFlagged) {
  std::vector<double> e(50);
  for (std::size_t t = 0; t < e.size(); ++t) e[t] = (t % 2 == 0) ? 1.5 : -1.5;
  const auto fit = oracle_ar1(e);
  EXPECT_DOUBLE_EQ(fit.a, -1.0);
  EXPECT_TRUE(fit.near_unit_root);
  EXPECT_TRUE(std::isfinite(fit.sigma2));
  std::vector<double> tiny{1.0, 2.0};
  EXPECT_THROW(oracle_ar1(tiny), Error);
}

TEST(Bic, SingleOrder) {
  const auto y = white(300, 16);
  const auto sel = bic_order_select(y, 1);
  EXPECT_EQ(sel.p, 1u);
  EXPECT_EQ(sel.selected().p, 1u);
}

TEST(Bic, ScoreFormulaAndRange) {
  const auto y = white(300, 17);
  const auto sel = bic_order_select(y, 3);
  ASSERT_EQ(sel.scores.size(), 3u);
  for (const auto& s : sel.scores) {
    EXPECT_NEAR(s.bic, 300 * std::log(s.fit.nu2) + s.p * std::log(300.0), 1e-9);
  }
  EXPECT_THROW(bic_order_select(y, 21), Error);
  EXPECT_THROW(bic_order_select(y, 0), Error);
}

TEST(Bic, SelectsTrueOrderForAr2) {
  int hits = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto y = ar2_path(2000, 0.167, 0.178, 0.322, 2000 + s);
    if (bic_order_select(y, 4).p == 2) ++hits;
  }
  EXPECT_GE(hits, 80);
}

TEST(Bic, WhiteNoisePrefersSmallOrNullFit) {
  int small = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto sel = bic_order_select(white(1000, 3000 + s), 3);
    if (sel.p == 1 && std::abs(sel.selected().a[0]) < 0.15) ++small;
  }
  EXPECT_GE(small, 40);
}

TEST(Causality, StepDownAgreesWithEigenvalues) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> coef(-1.5, 1.5);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> a(1 + rep % 4);
    for (double& v : a) v = coef(gen);
    EXPECT_EQ(is_causal(a), causal_by_eigenvalues(a)) << rep;
  }
  const std::vector<double> unit{1.0};
  EXPECT_FALSE(is_causal(unit));
  const std::vector<double> ok{0.167, 0.178};
  EXPECT_TRUE(is_causal(ok));
}
