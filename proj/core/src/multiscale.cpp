#include "mstrend/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mstrend/error.hpp"
#include "mstrend/parallel.hpp"

namespace mstrend {

double lambda_correction(double h) {
  if (!(h > 0.0) || h > 0.5) {
    std::ostringstream msg;
    msg << "lambda(h) needs 0 < h <= 1/2, got h = " << h;
    throw Error(ErrorKind::InvalidBandwidth, msg.str());
  }
  return std::sqrt(2.0 * std::log(1.0 / (2.0 * h)));
}

double psi_hat(std::span<const double> y, const WeightVector& w) { return w.dot(y); }

MultiscaleResult multiscale_statistic(std::span<const double> y, const WeightTable& table,
                                      double sigma_hat, unsigned workers) {
  if (!(sigma_hat > 0.0) || !std::isfinite(sigma_hat)) {
    std::ostringstream msg;
    msg << "sigma_hat must be positive and finite, got " << sigma_hat;
    throw Error(ErrorKind::NonPositiveSigma, msg.str());
  }
  if (y.size() != table.T()) {
    throw Error(ErrorKind::LengthMismatch, "series length " + std::to_string(y.size()) +
                                               " does not match table length " +
                                               std::to_string(table.T()));
  }
  MultiscaleResult out;
  out.points.resize(table.size());
  const double inv_sigma = 1.0 / sigma_hat;
  parallel_for(table.size(), workers, [&](std::size_t i) {
    const WeightEntry& e = table[i];
    PointStatistics& s = out.points[i];
    s.psi = e.weights.dot(y);
    const double z = s.psi * inv_sigma;
    s.corrected_abs = std::abs(z) - e.lambda;
    s.corrected_pos = z - e.lambda;
    s.corrected_neg = -z - e.lambda;
  });
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : out.points) best = std::max(best, s.corrected_abs);
  out.statistic = best;
  return out;
}

}  // namespace mstrend
