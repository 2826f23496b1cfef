#pragma once

#include <span>
#include <vector>

#include "mstrend/weights.hpp"

namespace mstrend {

/// lambda(h) = sqrt(2 log(1/(2h))). Defined for 0 < h <= 1/2; throws
/// InvalidBandwidth otherwise.
double lambda_correction(double h);

/// Kernel average psi_hat(u,h) = sum_t w_t y_t.
double psi_hat(std::span<const double> y, const WeightVector& w);

/// Per-point statistics of the multiscale test.
struct PointStatistics {
  double psi = 0.0;
  double corrected_abs = 0.0;  ///< |psi/sigma| - lambda(h)
  double corrected_pos = 0.0;  ///< psi/sigma - lambda(h)
  double corrected_neg = 0.0;  ///< -psi/sigma - lambda(h)
};

struct MultiscaleResult {
  std::vector<PointStatistics> points;  ///< aligned with the weight table entries
  double statistic = 0.0;               ///< max of corrected_abs over the table
};

/// Throws NonPositiveSigma unless sigma_hat > 0 and LengthMismatch unless
/// y.size() == table.T().
MultiscaleResult multiscale_statistic(std::span<const double> y, const WeightTable& table,
                                      double sigma_hat, unsigned workers = 1);

}  // namespace mstrend
