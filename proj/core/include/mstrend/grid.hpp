#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mstrend {

/// A location-scale pair stored as exact multiples of 1/T:
/// u = u_num / T and h = h_num / T.
struct GridPoint {
  std::int64_t u_num = 0;
  std::int64_t h_num = 0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Finite set of (u, h) points on which the multiscale statistic is evaluated.
///
/// Every point satisfies u = t/T for some 1 <= t <= T and 0 < h < 1/2 unless the
/// grid was built with unchecked(), which exists so that callers can exercise the
/// weight table's drop-and-report behaviour on arbitrary points.
class LocationScaleGrid {
 public:
  LocationScaleGrid() = default;

  /// u in {5k/T : 1 <= k <= T/5}, h in {(3 + 5l)/T : 0 <= l <= T/20} with h < 1/2.
  /// For interior u the Epanechnikov window of h = (3 + 5l)/T covers 5 + 10l points.
  static LocationScaleGrid default_grid(std::size_t T);

  /// Validated custom grid; throws InvalidConfig listing every offending point.
  static LocationScaleGrid custom(std::size_t T, std::vector<GridPoint> points);

  /// Custom grid from real-valued (u, h) pairs. Both coordinates must be integer
  /// multiples of 1/T (to 1e-9).
  static LocationScaleGrid from_reals(std::size_t T,
                                      std::span<const std::pair<double, double>> points);

  static LocationScaleGrid unchecked(std::size_t T, std::vector<GridPoint> points);

  std::size_t T() const noexcept { return T_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  std::span<const GridPoint> points() const noexcept { return points_; }
  const GridPoint& operator[](std::size_t i) const { return points_[i]; }

  double u(std::size_t i) const { return static_cast<double>(points_[i].u_num) / static_cast<double>(T_); }
  double h(std::size_t i) const { return static_cast<double>(points_[i].h_num) / static_cast<double>(T_); }

  double h_min() const;
  double h_max() const;

  /// Number of distinct locations u.
  std::size_t num_locations() const;

  /// "default" or "custom"; recorded in serialized outcomes.
  const std::string& description() const noexcept { return description_; }

  /// Violations of the grid invariants, one human-readable line each.
  std::vector<std::string> violations() const;

 private:
  LocationScaleGrid(std::size_t T, std::vector<GridPoint> points, std::string description);

  std::size_t T_ = 0;
  std::vector<GridPoint> points_;
  std::string description_;
};

}  // namespace mstrend
