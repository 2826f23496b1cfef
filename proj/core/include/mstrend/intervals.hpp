#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mstrend/grid.hpp"

namespace mstrend {

/// Closed interval [lo/T, hi/T] with integer endpoints in units of 1/T, so that
/// containment tests are exact.
struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  static Interval of(GridPoint p) noexcept { return {p.u_num - p.h_num, p.u_num + p.h_num}; }

  bool contains(const Interval& other) const noexcept { return lo <= other.lo && other.hi <= hi; }
  bool strictly_contains(const Interval& other) const noexcept {
    return contains(other) && !(*this == other);
  }
  bool inside_unit(std::size_t T) const noexcept {
    return lo >= 0 && hi <= static_cast<std::int64_t>(T);
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class SetKind { Both, Increase, Decrease };

std::string_view to_string(SetKind kind) noexcept;

struct RejectedInterval {
  std::size_t index = 0;     ///< position in the weight table / map
  GridPoint point;
  Interval interval;
  double statistic = 0.0;    ///< corrected statistic in the set's signed sense
};

struct IntervalSet {
  SetKind kind = SetKind::Both;
  std::vector<RejectedInterval> intervals;
};

/// Members that do not strictly contain another member, in input order.
std::vector<RejectedInterval> minimal_intervals(const IntervalSet& set);

/// Union of intervals as disjoint, sorted pieces (touching pieces merged).
std::vector<Interval> interval_union(std::span<const Interval> intervals);

/// Lebesgue measure, in rescaled time, of a union of disjoint pieces (integer
/// endpoints over T) intersected with [lo, hi].
double overlap_measure(std::span<const Interval> pieces, double lo, double hi, std::size_t T);

struct CalendarInterval {
  long first = 0;
  long last = 0;
};

/// Labels rescaled-time endpoints x with calendar units start + x T (rounded
/// inwards), clipped to [start, start + T - 1]. Returns nullopt when the clipped
/// label is empty.
std::optional<CalendarInterval> map_interval_to_calendar(const Interval& interval,
                                                         long start_year, std::size_t T);

}  // namespace mstrend
