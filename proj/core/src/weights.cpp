#include "mstrend/weights.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "mstrend/error.hpp"
#include "mstrend/multiscale.hpp"
#include "mstrend/parallel.hpp"

namespace mstrend {
namespace {

// Design points t (1-based) with |t - center| <= half, where center = uT and
// half = hT. Empty when first > last.
struct WindowRange {
  std::int64_t first = 1;
  std::int64_t last = 0;
};

WindowRange window_range(std::size_t T, double center, double half) {
  const double lo = std::ceil(center - half);
  const double hi = std::floor(center + half);
  WindowRange r;
  r.first = static_cast<std::int64_t>(std::max(1.0, lo));
  r.last = static_cast<std::int64_t>(std::min(static_cast<double>(T), hi));
  return r;
}

void check_bandwidth(double h) {
  if (!(h > 0.0) || !(h <= 0.5)) {
    std::ostringstream msg;
    msg << "bandwidth h = " << h << " outside (0, 1/2]";
    throw Error(ErrorKind::InvalidBandwidth, msg.str());
  }
}

WeightVector weights_scaled(std::size_t T, double u, double h, double center, double half,
                            const Kernel& kernel) {
  check_bandwidth(h);
  const WindowRange range = window_range(T, center, half);
  std::ostringstream where;
  where << "(u=" << u << ", h=" << h << ", T=" << T << ")";
  if (range.first > range.last) {
    throw Error(ErrorKind::DegenerateWindow, "no design point inside the window " + where.str());
  }
  const auto n = static_cast<std::size_t>(range.last - range.first + 1);
  std::vector<double> x(n), k(n);
  double s0 = 0.0, s1 = 0.0;
  std::size_t positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(range.first + static_cast<std::int64_t>(i));
    x[i] = (t - center) / half;
    k[i] = kernel(x[i]);
    if (k[i] > 0.0) ++positive;
    s0 += k[i];
    s1 += k[i] * x[i];
  }
  if (positive < 2) {
    throw Error(ErrorKind::DegenerateWindow,
                "fewer than two design points with positive kernel weight " + where.str());
  }
  // The common (Th)^{-1} factor of S0 and S1 cancels in the normalization.
  std::vector<double> band(n);
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    band[i] = k[i] * (s0 * x[i] - s1);
    residual += band[i];
  }
  // Analytically the sum is zero; remove the rounding residual on the support.
  const double shift = residual / static_cast<double>(positive);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (k[i] > 0.0) band[i] -= shift;
    norm2 += band[i] * band[i];
  }
  if (!(norm2 > 0.0)) {
    throw Error(ErrorKind::DegenerateWindow, "local linear weights vanish " + where.str());
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& w : band) w *= inv;

  WeightVector out;
  out.T = T;
  out.u = u;
  out.h = h;
  out.first = static_cast<std::size_t>(range.first - 1);
  out.band = std::move(band);
  return out;
}

}  // namespace

double moment_sum(std::size_t T, double u, double h, int ell, const Kernel& kernel) {
  check_bandwidth(h);
  const double n = static_cast<double>(T);
  const WindowRange range = window_range(T, u * n, h * n);
  double sum = 0.0;
  for (std::int64_t t = range.first; t <= range.last; ++t) {
    const double x = (static_cast<double>(t) / n - u) / h;
    sum += kernel(x) * std::pow(x, ell);
  }
  return sum / (n * h);
}

double WeightVector::at(std::size_t t) const noexcept {
  if (t < first + 1 || t > first + band.size()) return 0.0;
  return band[t - first - 1];
}

std::vector<double> WeightVector::dense() const {
  std::vector<double> out(T, 0.0);
  std::copy(band.begin(), band.end(), out.begin() + static_cast<std::ptrdiff_t>(first));
  return out;
}

double WeightVector::dot(std::span<const double> y) const {
  if (y.size() != T) {
    throw Error(ErrorKind::LengthMismatch, "series length " + std::to_string(y.size()) +
                                               " does not match weight length " +
                                               std::to_string(T));
  }
  double sum = 0.0;
  const double* yp = y.data() + first;
  for (std::size_t i = 0; i < band.size(); ++i) sum += band[i] * yp[i];
  return sum;
}

WeightVector local_linear_weights(std::size_t T, double u, double h, const Kernel& kernel) {
  const double n = static_cast<double>(T);
  return weights_scaled(T, u, h, u * n, h * n, kernel);
}

WeightVector local_linear_weights(std::size_t T, GridPoint point, const Kernel& kernel) {
  const double n = static_cast<double>(T);
  const auto u_num = static_cast<double>(point.u_num);
  const auto h_num = static_cast<double>(point.h_num);
  return weights_scaled(T, u_num / n, h_num / n, u_num, h_num, kernel);
}

WeightTable::WeightTable(std::size_t T, std::vector<WeightEntry> entries,
                         std::vector<DroppedPoint> dropped)
    : T_(T), entries_(std::move(entries)), dropped_(std::move(dropped)) {
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].point.h_num < entries_[smallest_h_].point.h_num) smallest_h_ = i;
  }
}

WeightTable build_weight_table(const LocationScaleGrid& grid, const Kernel& kernel,
                               unsigned workers) {
  if (grid.empty()) throw Error(ErrorKind::EmptyTable, "grid has no points");
  const std::size_t T = grid.T();
  std::vector<std::optional<WeightEntry>> slots(grid.size());
  std::vector<std::string> reasons(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const GridPoint p = grid[i];
    try {
      WeightEntry e;
      e.point = p;
      e.u = grid.u(i);
      e.h = grid.h(i);
      e.weights = local_linear_weights(T, p, kernel);
      e.lambda = lambda_correction(e.h);
      slots[i] = std::move(e);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::DegenerateWindow && err.kind() != ErrorKind::InvalidBandwidth) {
        throw;
      }
      reasons[i] = err.what();
    }
  });
  std::vector<WeightEntry> entries;
  std::vector<DroppedPoint> dropped;
  entries.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (slots[i]) {
      entries.push_back(std::move(*slots[i]));
    } else {
      dropped.push_back({grid[i], reasons[i]});
    }
  }
  if (entries.empty()) {
    throw Error(ErrorKind::EmptyTable,
                "all " + std::to_string(grid.size()) + " grid points have degenerate windows");
  }
  return WeightTable(T, std::move(entries), std::move(dropped));
}

}  // namespace mstrend
