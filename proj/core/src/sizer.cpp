#include "mstrend/sizer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "mstrend/error.hpp"
#include "mstrend/normal.hpp"
#include "mstrend/parallel.hpp"

namespace mstrend {
namespace {

constexpr double kMinEss = 5.0;

struct Window {
  std::size_t first = 0;          // 0-based index of t = first + 1
  std::vector<double> kh;         // K_h(t/T - u) on the band
  std::vector<double> d;          // t/T - u on the band
};

Window kernel_band(std::size_t T, double u, double h, const Kernel& kernel) {
  const double n = static_cast<double>(T);
  const auto lo = static_cast<std::int64_t>(std::max(1.0, std::ceil((u - h) * n)));
  const auto hi = static_cast<std::int64_t>(std::min(n, std::floor((u + h) * n)));
  Window w;
  w.first = static_cast<std::size_t>(std::max<std::int64_t>(lo - 1, 0));
  for (std::int64_t t = lo; t <= hi; ++t) {
    const double d = static_cast<double>(t) / n - u;
    w.d.push_back(d);
    w.kh.push_back(kernel(d / h) / h);
  }
  return w;
}

// Slope weights l_t of the local linear fit: slope = sum_t l_t y_t.
std::vector<double> slope_weights(const Window& w, double u, double h) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  std::size_t support = 0;
  for (std::size_t i = 0; i < w.d.size(); ++i) {
    s0 += w.kh[i];
    s1 += w.kh[i] * w.d[i];
    s2 += w.kh[i] * w.d[i] * w.d[i];
    if (w.kh[i] > 0.0) ++support;
  }
  const double det = s0 * s2 - s1 * s1;
  if (support < 2 || !(det > 1e-12 * s0 * s2)) {
    std::ostringstream msg;
    msg << "local linear design is singular at u = " << u << ", h = " << h;
    throw Error(ErrorKind::SingularDesign, msg.str());
  }
  std::vector<double> l(w.d.size());
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = w.kh[i] * (s0 * w.d[i] - s1) / det;
  return l;
}

double band_quadratic_form(std::span<const double> l, std::span<const double> gamma) {
  const std::size_t n = l.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (l[i] == 0.0) continue;
    double row = gamma[0] * l[i];
    for (std::size_t j = i + 1; j < n; ++j) row += 2.0 * gamma[j - i] * l[j];
    total += l[i] * row;
  }
  return std::max(0.0, total);
}

}  // namespace

double variance_of_mean(std::span<const double> gamma, std::size_t T) {
  if (T < 1) throw Error(ErrorKind::InvalidConfig, "variance of the mean needs T >= 1");
  if (gamma.size() < T) {
    throw Error(ErrorKind::LengthMismatch, "need " + std::to_string(T) +
                                               " autocovariances, got " +
                                               std::to_string(gamma.size()));
  }
  const double n = static_cast<double>(T);
  double s = 0.0;
  for (std::size_t k = 1; k < T; ++k) s += (1.0 - static_cast<double>(k) / n) * gamma[k];
  return gamma[0] / n + 2.0 * s / n;
}

double effective_sample_size(std::span<const double> gamma, std::size_t T, double u, double h,
                             const Kernel& kernel) {
  const double k0 = kernel(0.0);
  const double t_star = gamma[0] / variance_of_mean(gamma, T);
  const Window w = kernel_band(T, u, h, kernel);
  double s = 0.0;
  for (double v : w.kh) s += v * h;
  return t_star / static_cast<double>(T) * s / k0;
}

LocalSlope ll_derivative_and_sd(std::span<const double> y, double u, double h,
                                std::span<const double> gamma, const Kernel& kernel) {
  const std::size_t T = y.size();
  if (gamma.size() < T) {
    throw Error(ErrorKind::LengthMismatch, "need " + std::to_string(T) +
                                               " autocovariances, got " +
                                               std::to_string(gamma.size()));
  }
  const Window w = kernel_band(T, u, h, kernel);
  const std::vector<double> l = slope_weights(w, u, h);
  LocalSlope out;
  for (std::size_t i = 0; i < l.size(); ++i) out.estimate += l[i] * y[w.first + i];
  out.sd = std::sqrt(band_quadratic_form(l, gamma));
  return out;
}

double sizer_quantile(double alpha, double theta, double g) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(theta * g > 0.0)) {
    std::ostringstream msg;
    msg << "SiZer quantile needs alpha in (0,1) and theta g > 0, got alpha = " << alpha
        << ", theta g = " << theta * g;
    throw Error(ErrorKind::InvalidConfig, msg.str());
  }
  // 1 - (1 - alpha/2)^{1/(theta g)}, formed without cancellation.
  const double tail = -std::expm1(std::log1p(-alpha / 2.0) / (theta * g));
  return normal_upper_quantile(tail);
}

double bandwidth_cluster_index(double delta, double h, double g) {
  if (!(delta > 0.0) || !(h > 0.0) || !(g >= 1.0)) {
    std::ostringstream msg;
    msg << "cluster index needs delta > 0, h > 0 and g >= 1, got " << delta << ", " << h << ", " << g;
    throw Error(ErrorKind::InvalidConfig, msg.str());
  }
  // With a single location log g = 0 would give theta = 0; one location is one cluster.
  if (g <= 1.0) return 1.0;
  return 2.0 * normal_cdf(delta * std::sqrt(3.0 * std::log(g)) / (2.0 * h)) - 1.0;
}

void SizerConfig::validate() const {
  std::ostringstream problems;
  if (grid.empty()) problems << " grid is empty;";
  if (gamma.size() < grid.T()) {
    problems << " need " << grid.T() << " autocovariances, got " << gamma.size() << ";";
  }
  if (gamma.empty() || !(gamma[0] > 0.0)) problems << " gamma(0) must be positive;";
  if (!(alpha > 0.0 && alpha < 1.0)) problems << " alpha = " << alpha << " outside (0,1);";
  if (!(theta > 0.0)) problems << " theta = " << theta << " must be positive;";
  const std::string text = problems.str();
  if (!text.empty()) throw Error(ErrorKind::InvalidConfig, "SiZer config:" + text);
}

SizerPlan::SizerPlan(const SizerConfig& cfg, const Kernel& kernel, unsigned workers)
    : T_(cfg.grid.T()), g_(cfg.grid.num_locations()) {
  cfg.validate();
  q_ = sizer_quantile(cfg.alpha, cfg.theta, static_cast<double>(g_));
  std::vector<std::int64_t> locations;
  for (const GridPoint& p : cfg.grid.points()) locations.push_back(p.u_num);
  std::sort(locations.begin(), locations.end());
  locations.erase(std::unique(locations.begin(), locations.end()), locations.end());
  std::int64_t spacing = 1;
  if (locations.size() > 1) {
    spacing = locations[1] - locations[0];
    for (std::size_t i = 2; i < locations.size(); ++i)
      spacing = std::min(spacing, locations[i] - locations[i - 1]);
  }
  const double delta = static_cast<double>(spacing) / static_cast<double>(T_);
  const std::size_t n = cfg.grid.size();
  std::vector<std::optional<PlannedPoint>> slots(n);
  std::vector<std::string> reasons(n);
  const double t_star_ratio =
      cfg.gamma[0] / variance_of_mean(cfg.gamma, T_) / static_cast<double>(T_);
  const double k0 = kernel(0.0);
  parallel_for(n, workers, [&](std::size_t i) {
    const double u = cfg.grid.u(i);
    const double h = cfg.grid.h(i);
    const Window w = kernel_band(T_, u, h, kernel);
    double mass = 0.0;
    for (double v : w.kh) mass += v * h;
    const double ess = t_star_ratio * mass / k0;
    if (!(ess >= kMinEss)) {
      std::ostringstream msg;
      msg << "ESS* = " << ess << " below " << kMinEss;
      reasons[i] = msg.str();
      return;
    }
    try {
      double q = q_;
      if (cfg.cluster_rule == ClusterRule::Bandwidth) {
        const double gd = static_cast<double>(g_);
        q = sizer_quantile(cfg.alpha, bandwidth_cluster_index(delta, h, gd), gd);
      }
      PlannedPoint p{i, cfg.grid[i], ess, 0.0, q, w.first, slope_weights(w, u, h)};
      p.sd = std::sqrt(band_quadratic_form(p.slope_weights, cfg.gamma));
      slots[i] = std::move(p);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::SingularDesign) throw;
      reasons[i] = err.what();
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) {
      points_.push_back(std::move(*slots[i]));
    } else {
      dropped_.push_back({cfg.grid[i], reasons[i]});
    }
  }
}

SizerResult SizerPlan::evaluate(std::span<const double> y) const {
  if (y.size() != T_) {
    throw Error(ErrorKind::LengthMismatch, "series length " + std::to_string(y.size()) +
                                               " does not match SiZer design length " +
                                               std::to_string(T_));
  }
  SizerResult res;
  res.map.T = T_;
  res.map.g = g_;
  res.map.q = q_;
  res.map.dropped = dropped_;
  res.map.points.reserve(points_.size());
  IntervalSet flagged;
  flagged.kind = SetKind::Both;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const PlannedPoint& p = points_[k];
    SizerPoint sp;
    sp.grid_index = p.grid_index;
    sp.point = p.point;
    sp.ess = p.ess;
    sp.sd = p.sd;
    sp.q = p.q;
    const double* yp = y.data() + p.first;
    for (std::size_t i = 0; i < p.slope_weights.size(); ++i) sp.estimate += p.slope_weights[i] * yp[i];
    sp.flag = std::abs(sp.estimate) > p.q * p.sd;
    if (sp.flag) {
      flagged.intervals.push_back({k, p.point, Interval::of(p.point),
                                   p.sd > 0.0 ? std::abs(sp.estimate) / p.sd : 0.0});
    }
    res.map.points.push_back(sp);
  }
  res.reject = !flagged.intervals.empty();
  res.minimal = minimal_intervals(flagged);
  std::vector<Interval> pieces;
  pieces.reserve(res.minimal.size());
  for (const auto& r : res.minimal) pieces.push_back(r.interval);
  res.region = interval_union(pieces);
  return res;
}

SizerResult sizer_test(std::span<const double> y, const SizerConfig& cfg) {
  return SizerPlan(cfg).evaluate(y);
}

}  // namespace mstrend
