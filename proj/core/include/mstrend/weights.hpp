#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mstrend/grid.hpp"
#include "mstrend/kernel.hpp"

namespace mstrend {

/// S_{T,l}(u,h) = (Th)^{-1} sum_t K((t/T - u)/h) ((t/T - u)/h)^l. Returns 0 for an
/// empty window.
double moment_sum(std::size_t T, double u, double h, int ell, const Kernel& kernel = default_kernel());

/// Normalized local linear weights w_{t,T}(u,h), stored as the band of design
/// points inside the kernel window. Weights sum to zero and have unit norm.
struct WeightVector {
  std::size_t T = 0;
  double u = 0.0;
  double h = 0.0;
  std::size_t first = 0;      ///< 0-based index of band[0], i.e. t = first + 1
  std::vector<double> band;

  /// Weight at 1-based time t; zero outside the band.
  double at(std::size_t t) const noexcept;
  std::vector<double> dense() const;

  /// sum_t w_t y_t. Throws LengthMismatch unless y.size() == T.
  double dot(std::span<const double> y) const;
};

/// Throws DegenerateWindow when fewer than two design points carry positive
/// kernel mass or the unnormalized weights vanish, InvalidBandwidth unless
/// 0 < h <= 1/2. Grids never contain h = 1/2; it is accepted here as the limiting
/// case used by single-point reference grids.
WeightVector local_linear_weights(std::size_t T, double u, double h,
                                  const Kernel& kernel = default_kernel());

/// Same weights for an exact grid point (u = u_num/T, h = h_num/T).
WeightVector local_linear_weights(std::size_t T, GridPoint point,
                                  const Kernel& kernel = default_kernel());

struct WeightEntry {
  GridPoint point;
  double u = 0.0;
  double h = 0.0;
  double lambda = 0.0;   ///< additive correction for h
  WeightVector weights;
};

struct DroppedPoint {
  GridPoint point;
  std::string reason;
};

/// Weight vectors for every usable grid point, in grid order. Immutable after
/// construction.
class WeightTable {
 public:
  WeightTable(std::size_t T, std::vector<WeightEntry> entries, std::vector<DroppedPoint> dropped);

  std::size_t T() const noexcept { return T_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const WeightEntry> entries() const noexcept { return entries_; }
  const WeightEntry& operator[](std::size_t i) const { return entries_[i]; }
  std::span<const DroppedPoint> dropped() const noexcept { return dropped_; }

  /// Index of the entry with the smallest bandwidth (first one on ties).
  std::size_t smallest_bandwidth_index() const noexcept { return smallest_h_; }

 private:
  std::size_t T_;
  std::vector<WeightEntry> entries_;
  std::vector<DroppedPoint> dropped_;
  std::size_t smallest_h_ = 0;
};

/// Degenerate grid points are dropped and listed in WeightTable::dropped().
/// Throws EmptyTable if nothing survives. Output order is the grid order for any
/// worker count.
WeightTable build_weight_table(const LocationScaleGrid& grid,
                               const Kernel& kernel = default_kernel(),
                               unsigned workers = 1);

}  // namespace mstrend
