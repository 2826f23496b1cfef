#include "mstrend/inference.hpp"

#include <cmath>
#include <sstream>

#include "mstrend/error.hpp"

namespace mstrend {
namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

}  // namespace

std::string describe(const LrvMethod& method) {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const ArMethod& m) {
                   if (m.p == 0) {
                     out << "ar(bic<=" << m.p_max << ")";
                   } else {
                     out << "ar(" << m.p << ")";
                   }
                   out << " q=" << m.q << " rbar=" << m.r_bar;
                 },
                 [&](const HacConfig& m) {
                   out << "hac(" << to_string(m.window) << ") q=" << m.q << " b=" << m.b;
                 },
                 [&](const FixedVariance& m) { out << "fixed sigma2=" << m.sigma2; },
             },
             method);
  return out.str();
}

LrvEstimate estimate_long_run_variance(std::span<const double> y, const LrvMethod& method) {
  LrvEstimate est;
  std::visit(Overloaded{
                 [&](const ArMethod& m) {
                   if (m.p == 0) {
                     OrderSelection sel = bic_order_select(y, m.p_max, m.q, m.r_bar);
                     est.ar_fit = sel.selected();
                     est.order_selection = std::move(sel);
                   } else {
                     est.ar_fit = averaged_ar_fit(y, m.p, m.q, m.r_bar);
                   }
                   est.sigma2 = est.ar_fit->sigma2;
                 },
                 [&](const HacConfig& m) { est.sigma2 = hac_estimate(y, m); },
                 [&](const FixedVariance& m) { est.sigma2 = m.sigma2; },
             },
             method);
  if (!(est.sigma2 > 0.0) || !std::isfinite(est.sigma2)) {
    std::ostringstream msg;
    msg << "long-run variance estimate " << est.sigma2 << " from " << describe(method)
        << " is not positive";
    throw Error(ErrorKind::NonPositiveSigma, msg.str());
  }
  return est;
}

std::array<IntervalSet, 3> rejection_sets(std::span<const GridPoint> points,
                                          std::span<const PointStatistics> stats,
                                          double critical_value, std::size_t T) {
  if (points.size() != stats.size()) {
    throw Error(ErrorKind::LengthMismatch, "points and statistics differ in length");
  }
  std::array<IntervalSet, 3> sets;
  sets[0].kind = SetKind::Both;
  sets[1].kind = SetKind::Increase;
  sets[2].kind = SetKind::Decrease;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Interval iv = Interval::of(points[i]);
    const PointStatistics& s = stats[i];
    if (s.corrected_abs > critical_value) sets[0].intervals.push_back({i, points[i], iv, s.corrected_abs});
    if (!iv.inside_unit(T)) continue;
    if (s.corrected_pos > critical_value) sets[1].intervals.push_back({i, points[i], iv, s.corrected_pos});
    if (s.corrected_neg > critical_value) sets[2].intervals.push_back({i, points[i], iv, s.corrected_neg});
  }
  return sets;
}

PreparedTest::PreparedTest(const LocationScaleGrid& grid, const QuantileConfig& qcfg,
                           unsigned workers)
    : table_(build_weight_table(grid, default_kernel(), workers)),
      crit_(simulate_critical_values(table_, qcfg, workers)),
      qcfg_(qcfg),
      grid_description_(grid.description()) {
  h_min_ = table_[0].h;
  h_max_ = table_[0].h;
  for (const WeightEntry& e : table_.entries()) {
    h_min_ = std::min(h_min_, e.h);
    h_max_ = std::max(h_max_, e.h);
  }
}

TestOutcome PreparedTest::evaluate(std::span<const double> y, double alpha, double sigma2,
                                   unsigned workers) const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    std::ostringstream msg;
    msg << "long-run variance " << sigma2 << " is not positive";
    throw Error(ErrorKind::NonPositiveSigma, msg.str());
  }
  MultiscaleResult ms = multiscale_statistic(y, table_, std::sqrt(sigma2), workers);
  TestOutcome out;
  out.T = table_.T();
  out.alpha = alpha;
  out.statistic = ms.statistic;
  out.critical_value = crit_.quantile(alpha);
  out.reject = out.statistic > out.critical_value;
  out.sigma2 = sigma2;
  out.quantile_config = qcfg_;
  out.grid_description = grid_description_;
  out.h_min = h_min_;
  out.h_max = h_max_;
  out.points.reserve(table_.size());
  for (const WeightEntry& e : table_.entries()) {
    out.points.push_back(e.point);
    if (!(out.critical_value + e.lambda > 0.0)) out.sign_threshold_positive = false;
  }
  out.stats = std::move(ms.points);
  out.dropped.assign(table_.dropped().begin(), table_.dropped().end());
  out.sets = rejection_sets(out.points, out.stats, out.critical_value, out.T);
  for (std::size_t k = 0; k < 3; ++k) out.minimal[k] = minimal_intervals(out.sets[k]);
  return out;
}

std::vector<bool> PreparedTest::decide(std::span<const double> y, std::span<const double> alphas,
                                       double sigma2) const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    std::ostringstream msg;
    msg << "long-run variance " << sigma2 << " is not positive";
    throw Error(ErrorKind::NonPositiveSigma, msg.str());
  }
  const double stat = multiscale_statistic(y, table_, std::sqrt(sigma2)).statistic;
  std::vector<bool> out;
  out.reserve(alphas.size());
  for (double a : alphas) out.push_back(stat > crit_.quantile(a));
  return out;
}

TestOutcome run_test(std::span<const double> y, double alpha, const LocationScaleGrid& grid,
                     const LrvMethod& lrv, const QuantileConfig& qcfg, unsigned workers) {
  if (y.size() != grid.T()) {
    throw Error(ErrorKind::LengthMismatch, "series length " + std::to_string(y.size()) +
                                               " does not match grid length " +
                                               std::to_string(grid.T()));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " outside (0,1)";
    throw Error(ErrorKind::InvalidConfig, msg.str());
  }
  LrvEstimate est = estimate_long_run_variance(y, lrv);
  const PreparedTest prepared(grid, qcfg, workers);
  TestOutcome out = prepared.evaluate(y, alpha, est.sigma2, workers);
  out.ar_fit = std::move(est.ar_fit);
  if (est.order_selection) out.selected_order = est.order_selection->p;
  out.lrv_method = describe(lrv);
  return out;
}

}  // namespace mstrend
