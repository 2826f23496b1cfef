#include "mstrend/intervals.hpp"

#include <algorithm>
#include <numeric>

namespace mstrend {

std::string_view to_string(SetKind kind) noexcept {
  switch (kind) {
    case SetKind::Both:
      return "both";
    case SetKind::Increase:
      return "increase";
    case SetKind::Decrease:
      return "decrease";
  }
  return "unknown";
}

std::vector<RejectedInterval> minimal_intervals(const IntervalSet& set) {
  const auto& in = set.intervals;
  std::vector<std::size_t> order(in.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Interval& x = in[a].interval;
    const Interval& y = in[b].interval;
    if (x.lo != y.lo) return x.lo > y.lo;
    return x.hi < y.hi;
  });
  // Every interval seen before the current group starts no earlier; one of them
  // ends no later exactly when the current interval strictly contains it.
  std::vector<bool> minimal(in.size(), true);
  bool have_min = false;
  std::int64_t min_hi = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    const Interval cur = in[order[i]].interval;
    while (j < order.size() && in[order[j]].interval == cur) ++j;
    const bool contains_other = have_min && min_hi <= cur.hi;
    for (std::size_t k = i; k < j; ++k) minimal[order[k]] = !contains_other;
    if (!have_min || cur.hi < min_hi) min_hi = cur.hi;
    have_min = true;
    i = j;
  }
  std::vector<RejectedInterval> out;
  for (std::size_t k = 0; k < in.size(); ++k) {
    if (minimal[k]) out.push_back(in[k]);
  }
  return out;
}

std::vector<Interval> interval_union(std::span<const Interval> intervals) {
  std::vector<Interval> sorted(intervals.begin(), intervals.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi; });
  std::vector<Interval> out;
  for (const Interval& iv : sorted) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

double overlap_measure(std::span<const Interval> pieces, double lo, double hi, std::size_t T) {
  const double n = static_cast<double>(T);
  double total = 0.0;
  for (const Interval& p : pieces) {
    const double a = std::max(lo, static_cast<double>(p.lo) / n);
    const double b = std::min(hi, static_cast<double>(p.hi) / n);
    if (b > a) total += b - a;
  }
  return total;
}

std::optional<CalendarInterval> map_interval_to_calendar(const Interval& interval, long start_year,
                                                         std::size_t T) {
  const long last_label = start_year + static_cast<long>(T) - 1;
  const long first = std::max(start_year, start_year + static_cast<long>(interval.lo));
  const long last = std::min(last_label, start_year + static_cast<long>(interval.hi));
  if (first > last) return std::nullopt;
  return CalendarInterval{first, last};
}

}  // namespace mstrend
