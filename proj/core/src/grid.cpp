#include "mstrend/grid.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mstrend/error.hpp"

namespace mstrend {

LocationScaleGrid::LocationScaleGrid(std::size_t T, std::vector<GridPoint> points,
                                     std::string description)
    : T_(T), points_(std::move(points)), description_(std::move(description)) {}

LocationScaleGrid LocationScaleGrid::default_grid(std::size_t T) {
  if (T < 20) {
    throw Error(ErrorKind::InvalidConfig,
                "default grid needs T >= 20, got T = " + std::to_string(T));
  }
  const auto n = static_cast<std::int64_t>(T);
  std::vector<std::int64_t> bandwidths;
  for (std::int64_t ell = 0; ell <= n / 20; ++ell) {
    const std::int64_t h_num = 3 + 5 * ell;
    if (2 * h_num < n) bandwidths.push_back(h_num);
  }
  std::vector<GridPoint> points;
  points.reserve(static_cast<std::size_t>(n / 5) * bandwidths.size());
  for (std::int64_t k = 1; k <= n / 5; ++k) {
    for (std::int64_t h_num : bandwidths) points.push_back({5 * k, h_num});
  }
  return LocationScaleGrid(T, std::move(points), "default");
}

LocationScaleGrid LocationScaleGrid::custom(std::size_t T, std::vector<GridPoint> points) {
  LocationScaleGrid grid(T, std::move(points), "custom");
  const auto problems = grid.violations();
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid grid (" << problems.size() << " problem(s)):";
    for (const auto& p : problems) msg << "\n  " << p;
    throw Error(ErrorKind::InvalidConfig, msg.str());
  }
  return grid;
}

LocationScaleGrid LocationScaleGrid::from_reals(std::size_t T,
                                                std::span<const std::pair<double, double>> points) {
  std::vector<GridPoint> exact;
  std::vector<std::string> problems;
  const double n = static_cast<double>(T);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [u, h] = points[i];
    const double us = u * n;
    const double hs = h * n;
    const double ur = std::round(us);
    const double hr = std::round(hs);
    if (std::abs(us - ur) > 1e-9 * std::max(1.0, n) || std::abs(hs - hr) > 1e-9 * std::max(1.0, n)) {
      std::ostringstream msg;
      msg << "point " << i + 1 << " (u=" << u << ", h=" << h << ") is not on the 1/T lattice";
      problems.push_back(msg.str());
      continue;
    }
    exact.push_back({static_cast<std::int64_t>(ur), static_cast<std::int64_t>(hr)});
  }
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid grid (" << problems.size() << " problem(s)):";
    for (const auto& p : problems) msg << "\n  " << p;
    throw Error(ErrorKind::InvalidConfig, msg.str());
  }
  return custom(T, std::move(exact));
}

LocationScaleGrid LocationScaleGrid::unchecked(std::size_t T, std::vector<GridPoint> points) {
  return LocationScaleGrid(T, std::move(points), "custom");
}

double LocationScaleGrid::h_min() const {
  if (points_.empty()) return 0.0;
  const auto it = std::min_element(points_.begin(), points_.end(),
                                   [](auto& a, auto& b) { return a.h_num < b.h_num; });
  return static_cast<double>(it->h_num) / static_cast<double>(T_);
}

double LocationScaleGrid::h_max() const {
  if (points_.empty()) return 0.0;
  const auto it = std::max_element(points_.begin(), points_.end(),
                                   [](auto& a, auto& b) { return a.h_num < b.h_num; });
  return static_cast<double>(it->h_num) / static_cast<double>(T_);
}

std::size_t LocationScaleGrid::num_locations() const {
  std::set<std::int64_t> locations;
  for (const auto& p : points_) locations.insert(p.u_num);
  return locations.size();
}

std::vector<std::string> LocationScaleGrid::violations() const {
  std::vector<std::string> problems;
  if (T_ < 2) problems.push_back("T must be at least 2");
  if (points_.empty()) problems.push_back("grid is empty");
  const auto n = static_cast<std::int64_t>(T_);
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    std::ostringstream where;
    where << "point " << i + 1 << " (u=" << p.u_num << "/" << n << ", h=" << p.h_num << "/" << n
          << ")";
    if (p.u_num < 1 || p.u_num > n) problems.push_back(where.str() + ": u is not t/T with 1 <= t <= T");
    if (p.h_num < 1) problems.push_back(where.str() + ": h must be positive");
    if (2 * p.h_num >= n) problems.push_back(where.str() + ": h must be below 1/2");
    if (!seen.insert({p.u_num, p.h_num}).second) problems.push_back(where.str() + ": duplicate point");
  }
  return problems;
}

}  // namespace mstrend
