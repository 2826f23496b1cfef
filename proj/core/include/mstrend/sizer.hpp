#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mstrend/grid.hpp"
#include "mstrend/intervals.hpp"
#include "mstrend/kernel.hpp"
#include "mstrend/weights.hpp"

namespace mstrend {

/// Var of the sample mean for autocovariances gamma(0..T-1):
/// gamma(0)/T + (2/T) sum_{k=1}^{T-1} (1 - k/T) gamma(k).
double variance_of_mean(std::span<const double> gamma, std::size_t T);

/// ESS*(u,h) = (T*/T) sum_t K_h(t/T - u) / K_h(0) with T* = gamma(0) / Var(mean).
double effective_sample_size(std::span<const double> gamma, std::size_t T, double u, double h,
                             const Kernel& kernel = default_kernel());

struct LocalSlope {
  double estimate = 0.0;
  double sd = 0.0;
};

/// Local linear derivative estimate at u with bandwidth h and its standard
/// deviation sqrt(e' V e), V = (X'WX)^{-1} X' Sigma X (X'WX)^{-1},
/// Sigma_st = gamma(s-t) K_h(s/T - u) K_h(t/T - u). Throws SingularDesign.
LocalSlope ll_derivative_and_sd(std::span<const double> y, double u, double h,
                                std::span<const double> gamma,
                                const Kernel& kernel = default_kernel());

/// q = Phi^{-1}((1 - alpha/2)^{1/(theta g)}); no dependence on h.
double sizer_quantile(double alpha, double theta, double g);

/// Where the cluster index comes from: the fixed SizerConfig::theta, or the
/// bandwidth-dependent theta(h) = 2 Phi(delta sqrt(3 log g) / (2h)) - 1 of
/// Hannig and Marron (2006) for location spacing delta.
enum class ClusterRule { Fixed, Bandwidth };

double bandwidth_cluster_index(double delta, double h, double g);

struct SizerConfig {
  std::vector<double> gamma;   ///< known autocovariances gamma(0..T-1)
  double alpha = 0.05;
  double theta = 1.0;          ///< cluster index for ClusterRule::Fixed
  ClusterRule cluster_rule = ClusterRule::Fixed;
  LocationScaleGrid grid;

  void validate() const;
};

struct SizerPoint {
  std::size_t grid_index = 0;
  GridPoint point;
  double ess = 0.0;
  double estimate = 0.0;
  double sd = 0.0;
  double q = 0.0;
  bool flag = false;
};

struct SizerMap {
  std::size_t T = 0;
  std::size_t g = 0;          ///< number of locations in the full grid
  double q = 0.0;             ///< q for the fixed rule; per-point q otherwise
  std::vector<SizerPoint> points;
  std::vector<DroppedPoint> dropped;   ///< ESS* < 5 or singular design
};

struct SizerResult {
  SizerMap map;
  bool reject = false;
  std::vector<RejectedInterval> minimal;
  std::vector<Interval> region;        ///< union of the minimal flagged intervals
};

/// Data-independent part of SiZer (restricted grid, slope weights, sds, q),
/// built once per design and reused across series.
class SizerPlan {
 public:
  SizerPlan(const SizerConfig& cfg, const Kernel& kernel = default_kernel(), unsigned workers = 1);

  SizerResult evaluate(std::span<const double> y) const;

  std::size_t T() const noexcept { return T_; }
  std::size_t size() const noexcept { return points_.size(); }
  double q() const noexcept { return q_; }

 private:
  struct PlannedPoint {
    std::size_t grid_index;
    GridPoint point;
    double ess;
    double sd;
    double q;
    std::size_t first;
    std::vector<double> slope_weights;
  };

  std::size_t T_;
  std::size_t g_;
  double q_;
  std::vector<PlannedPoint> points_;
  std::vector<DroppedPoint> dropped_;
};

SizerResult sizer_test(std::span<const double> y, const SizerConfig& cfg);

}  // namespace mstrend
