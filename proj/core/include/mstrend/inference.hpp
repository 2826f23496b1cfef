#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mstrend/gauss_quantile.hpp"
#include "mstrend/grid.hpp"
#include "mstrend/intervals.hpp"
#include "mstrend/lrv.hpp"
#include "mstrend/multiscale.hpp"
#include "mstrend/weights.hpp"

namespace mstrend {

/// AR(p) pipeline; p == 0 selects the order by BIC over 1..p_max.
struct ArMethod {
  std::size_t p = 1;
  std::size_t q = 25;
  std::size_t r_bar = 10;
  std::size_t p_max = 8;
};

struct FixedVariance {
  double sigma2 = 1.0;
};

using LrvMethod = std::variant<ArMethod, HacConfig, FixedVariance>;

std::string describe(const LrvMethod& method);

struct LrvEstimate {
  double sigma2 = 0.0;
  std::optional<ArFit> ar_fit;
  std::optional<OrderSelection> order_selection;
};

/// Throws NonPositiveSigma if the estimate is not strictly positive.
LrvEstimate estimate_long_run_variance(std::span<const double> y, const LrvMethod& method);

/// Both/increase/decrease sets: |psi/sigma| - lambda > q, psi/sigma - lambda > q,
/// -psi/sigma - lambda > q; the signed sets keep only intervals inside [0,1].
std::array<IntervalSet, 3> rejection_sets(std::span<const GridPoint> points,
                                          std::span<const PointStatistics> stats,
                                          double critical_value, std::size_t T);

struct TestOutcome {
  std::size_t T = 0;
  double alpha = 0.05;
  double statistic = 0.0;        ///< multiscale statistic
  double critical_value = 0.0;   ///< q_T(alpha)
  bool reject = false;
  double sigma2 = 0.0;
  std::optional<ArFit> ar_fit;
  std::optional<std::size_t> selected_order;
  std::string lrv_method;
  QuantileConfig quantile_config;
  std::string grid_description;
  double h_min = 0.0;
  double h_max = 0.0;
  std::vector<GridPoint> points;          ///< surviving grid points
  std::vector<PointStatistics> stats;     ///< aligned with points
  std::vector<DroppedPoint> dropped;
  std::array<IntervalSet, 3> sets;        ///< indexed by SetKind
  std::array<std::vector<RejectedInterval>, 3> minimal;
  /// q_T(alpha) + lambda(h) > 0 on every grid bandwidth, so no point can be in
  /// both signed sets.
  bool sign_threshold_positive = true;

  const IntervalSet& set(SetKind kind) const { return sets[static_cast<std::size_t>(kind)]; }
  const std::vector<RejectedInterval>& minimal_set(SetKind kind) const {
    return minimal[static_cast<std::size_t>(kind)];
  }
};

/// Weight table and Gaussian critical values for one (T, grid, simulation) cell,
/// shared across test evaluations.
class PreparedTest {
 public:
  PreparedTest(const LocationScaleGrid& grid, const QuantileConfig& qcfg, unsigned workers = 1);

  const WeightTable& table() const noexcept { return table_; }
  const CriticalValues& critical_values() const noexcept { return crit_; }
  const QuantileConfig& quantile_config() const noexcept { return qcfg_; }
  const std::string& grid_description() const noexcept { return grid_description_; }

  /// Statistic, sets and minimal intervals for a known variance estimate.
  TestOutcome evaluate(std::span<const double> y, double alpha, double sigma2,
                       unsigned workers = 1) const;

  /// Cheap reject/accept decision for several levels; no sets are formed.
  std::vector<bool> decide(std::span<const double> y, std::span<const double> alphas,
                           double sigma2) const;

 private:
  WeightTable table_;
  CriticalValues crit_;
  QuantileConfig qcfg_;
  std::string grid_description_;
  double h_min_ = 0.0;
  double h_max_ = 0.0;
};

/// Full pipeline: weight table, variance estimate, critical value, statistic,
/// rejection sets and minimal intervals.
TestOutcome run_test(std::span<const double> y, double alpha, const LocationScaleGrid& grid,
                     const LrvMethod& lrv, const QuantileConfig& qcfg, unsigned workers = 1);

}  // namespace mstrend
