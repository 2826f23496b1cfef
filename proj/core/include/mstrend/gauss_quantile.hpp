#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mstrend/weights.hpp"

namespace mstrend {

struct QuantileConfig {
  std::size_t n_sims = 1000;
  std::uint64_t seed = 0;
  std::vector<double> alphas{0.01, 0.05, 0.10};

  /// Throws InvalidConfig: n_sims >= 100 and every alpha in (0,1).
  void validate() const;
};

/// max over the table of |sum_t w_t z_t| - lambda(h). sigma cancels in the
/// Gaussian reference statistic and is fixed to 1.
double gaussian_statistic_draw(const WeightTable& table, std::span<const double> noise);

/// (1-alpha) empirical quantile: the ceil((1-alpha) n)-th order statistic of
/// `sorted` (ascending), without interpolation.
double upper_order_statistic(std::span<const double> sorted, double alpha);

/// Simulated draws of the Gaussian reference statistic and their quantiles.
class CriticalValues {
 public:
  CriticalValues(std::vector<double> draws, std::span<const double> alphas);

  std::span<const double> draws() const noexcept { return draws_; }
  std::span<const double> sorted_draws() const noexcept { return sorted_; }

  /// Quantiles for the configured alphas, ascending in alpha.
  std::span<const std::pair<double, double>> quantiles() const noexcept { return quantiles_; }

  /// q_T(alpha) for any alpha in (0,1), answered from the stored draws.
  double quantile(double alpha) const;

 private:
  std::vector<double> draws_;
  std::vector<double> sorted_;
  std::vector<std::pair<double, double>> quantiles_;
};

/// Replicate i draws its noise from NormalStream(cfg.seed,
/// stream_id(GaussianReference, i)); the draws are identical for any worker count.
CriticalValues simulate_critical_values(const WeightTable& table, const QuantileConfig& cfg,
                                        unsigned workers = 1);

}  // namespace mstrend
