#include "mstrend/lrv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mstrend/error.hpp"
#include "mstrend/linalg.hpp"

namespace mstrend {
namespace {

void check_order(std::size_t p, std::size_t q) {
  std::ostringstream problems;
  if (p < 1) problems << " AR order must be at least 1;";
  if (p > kMaxArOrder) problems << " AR order " << p << " exceeds the cap " << kMaxArOrder << ";";
  if (p >= q) problems << " AR order " << p << " must be below the difference order q = " << q << ";";
  const std::string text = problems.str();
  if (!text.empty()) throw Error(ErrorKind::InvalidConfig, "AR fit:" + text);
}

// Solves the Toeplitz system Gamma a = rhs with Gamma_{ij} = gamma(|i-j|).
std::vector<double> solve_toeplitz(const DifferenceCovariances& g, std::span<const double> rhs) {
  const std::size_t p = rhs.size();
  SquareMatrix m(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) m(i, j) = g.at(static_cast<long>(i) - static_cast<long>(j));
  return solve_linear(std::move(m), rhs);
}

double sum_sq_diff(std::span<const double> y, std::size_t lag) {
  double s = 0.0;
  for (std::size_t t = lag; t < y.size(); ++t) {
    const double d = y[t] - y[t - lag];
    s += d * d;
  }
  return s;
}

}  // namespace

double DifferenceCovariances::at(long lag) const {
  const auto l = static_cast<std::size_t>(lag < 0 ? -lag : lag);
  if (l >= gamma.size()) {
    throw Error(ErrorKind::InvalidConfig, "lag " + std::to_string(l) + " beyond the stored " +
                                              std::to_string(gamma.size()) + " covariances");
  }
  return gamma[l];
}

DifferenceCovariances diff_autocovariances(std::span<const double> y, std::size_t q,
                                           std::size_t max_lag) {
  const std::size_t T = y.size();
  if (q < 1) throw Error(ErrorKind::InvalidConfig, "difference order q must be at least 1");
  if (q + max_lag + 1 > T) {
    throw Error(ErrorKind::InsufficientData,
                "series of length " + std::to_string(T) + " is too short for difference order " +
                    std::to_string(q) + " and " + std::to_string(max_lag) + " lags");
  }
  std::vector<double> d(T - q);
  for (std::size_t t = q; t < T; ++t) d[t - q] = y[t] - y[t - q];
  DifferenceCovariances out;
  out.T = T;
  out.q = q;
  out.gamma.resize(max_lag + 1);
  const double norm = 1.0 / static_cast<double>(T - q);
  for (std::size_t l = 0; l <= max_lag; ++l) {
    double s = 0.0;
    for (std::size_t i = l; i < d.size(); ++i) s += d[i] * d[i - l];
    out.gamma[l] = s * norm;
  }
  return out;
}

std::vector<double> pilot_ar(std::span<const double> y, std::size_t p, std::size_t q) {
  check_order(p, q);
  const DifferenceCovariances g = diff_autocovariances(y, q, p);
  return solve_toeplitz(g, std::span<const double>(g.gamma).subspan(1, p));
}

std::vector<double> ma_coefficients(std::span<const double> a, std::size_t k_max) {
  std::vector<double> c(k_max + 1, 0.0);
  c[0] = 1.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= std::min(a.size(), k); ++j) s += a[j - 1] * c[k - j];
    c[k] = s;
  }
  return c;
}

double innovation_variance(std::span<const double> y, std::span<const double> a) {
  const std::size_t T = y.size();
  const std::size_t p = a.size();
  if (T <= 2 * p + 1) {
    throw Error(ErrorKind::InsufficientData, "series of length " + std::to_string(T) +
                                                 " is too short for AR order " + std::to_string(p));
  }
  // 0-based: dy[i] = y[i] - y[i-1] for i >= 1; residuals need i - p >= 1.
  double s = 0.0;
  for (std::size_t i = p + 1; i < T; ++i) {
    double r = y[i] - y[i - 1];
    for (std::size_t j = 1; j <= p; ++j) r -= a[j - 1] * (y[i - j] - y[i - j - 1]);
    s += r * r;
  }
  return s / (2.0 * static_cast<double>(T));
}

std::vector<double> refined_ar(std::span<const double> y, std::size_t p,
                               std::span<const double> pilot, double nu2_tilde, std::size_t r) {
  if (pilot.size() != p) {
    throw Error(ErrorKind::LengthMismatch, "pilot has " + std::to_string(pilot.size()) +
                                               " coefficients, expected " + std::to_string(p));
  }
  if (r < 1) throw Error(ErrorKind::InvalidConfig, "difference order r must be at least 1");
  const DifferenceCovariances g = diff_autocovariances(y, r, p);
  const std::vector<double> c = ma_coefficients(pilot, r);
  std::vector<double> rhs(p);
  for (std::size_t j = 1; j <= p; ++j) {
    const double cj = (j <= r) ? c[r - j] : 0.0;
    rhs[j - 1] = g.gamma[j] + nu2_tilde * cj;
  }
  return solve_toeplitz(g, rhs);
}

double long_run_variance_from_ar(std::span<const double> a, double nu2) {
  const double denom = 1.0 - std::accumulate(a.begin(), a.end(), 0.0);
  if (!(std::abs(denom) >= 1e-8)) {
    std::ostringstream msg;
    msg << "AR coefficients sum to " << 1.0 - denom << "; the fit is at a unit root";
    throw Error(ErrorKind::ExplosiveFit, msg.str());
  }
  return nu2 / (denom * denom);
}

ArFit averaged_ar_fit(std::span<const double> y, std::size_t p, std::size_t q, std::size_t r_bar) {
  check_order(p, q);
  if (r_bar < 1) throw Error(ErrorKind::InvalidConfig, "r_bar must be at least 1");
  ArFit fit;
  fit.p = p;
  fit.q = q;
  fit.r_bar = r_bar;
  fit.pilot = pilot_ar(y, p, q);
  fit.nu2_pilot = innovation_variance(y, fit.pilot);
  fit.a.assign(p, 0.0);
  for (std::size_t r = 1; r <= r_bar; ++r) {
    const std::vector<double> ar = refined_ar(y, p, fit.pilot, fit.nu2_pilot, r);
    for (std::size_t j = 0; j < p; ++j) fit.a[j] += ar[j];
  }
  for (double& v : fit.a) v /= static_cast<double>(r_bar);
  fit.nu2 = innovation_variance(y, fit.a);
  fit.sigma2 = long_run_variance_from_ar(fit.a, fit.nu2);
  return fit;
}

double lag_window(LagWindow window, double x) noexcept {
  const double ax = std::abs(x);
  if (ax > 1.0) return 0.0;
  switch (window) {
    case LagWindow::Bartlett:
      return 1.0 - ax;
    case LagWindow::Parzen:
      if (ax <= 0.5) return 1.0 - 6.0 * ax * ax + 6.0 * ax * ax * ax;
      return 2.0 * (1.0 - ax) * (1.0 - ax) * (1.0 - ax);
  }
  return 0.0;
}

std::string to_string(LagWindow window) {
  return window == LagWindow::Bartlett ? "bartlett" : "parzen";
}

LagWindow parse_lag_window(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "bartlett") return LagWindow::Bartlett;
  if (lower == "parzen") return LagWindow::Parzen;
  throw Error(ErrorKind::InvalidConfig, "unknown lag window '" + name + "'");
}

void HacConfig::validate(std::size_t T) const {
  std::ostringstream problems;
  if (b < 1) problems << " bandwidth b must be at least 1;";
  if (b >= q) problems << " bandwidth b = " << b << " must be below q = " << q << ";";
  if (2 * q >= T) problems << " q = " << q << " must be below T/2 = " << T / 2.0 << ";";
  const std::string text = problems.str();
  if (!text.empty()) throw Error(ErrorKind::InvalidConfig, "HAC config:" + text);
}

double hac_estimate(std::span<const double> y, const HacConfig& cfg) {
  const std::size_t T = y.size();
  cfg.validate(T);
  const double g0 = sum_sq_diff(y, cfg.q) / (2.0 * static_cast<double>(T - cfg.q));
  double total = g0;
  for (std::size_t l = 1; l <= cfg.b; ++l) {
    const double w = lag_window(cfg.window, static_cast<double>(l) / static_cast<double>(cfg.b));
    if (w == 0.0) continue;
    const double gl = g0 - sum_sq_diff(y, l) / (2.0 * static_cast<double>(T - l));
    total += 2.0 * w * gl;
  }
  return total;
}

OracleAr1 oracle_ar1(std::span<const double> e) {
  if (e.size() < 3) {
    throw Error(ErrorKind::InsufficientData, "oracle AR(1) fit needs at least 3 observations");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t t = 1; t < e.size(); ++t) {
    num += e[t] * e[t - 1];
    den += e[t - 1] * e[t - 1];
  }
  if (!(den > 0.0)) throw Error(ErrorKind::SingularSystem, "errors are identically zero");
  OracleAr1 out;
  out.a = num / den;
  double ss = 0.0;
  for (std::size_t t = 1; t < e.size(); ++t) {
    const double r = e[t] - out.a * e[t - 1];
    ss += r * r;
  }
  out.nu2 = ss / static_cast<double>(e.size() - 1);
  out.near_unit_root = std::abs(1.0 - out.a) < 1e-8 || std::abs(out.a) >= 1.0;
  out.sigma2 = std::abs(1.0 - out.a) < 1e-8 ? std::numeric_limits<double>::infinity()
                                            : out.nu2 / ((1.0 - out.a) * (1.0 - out.a));
  return out;
}

const ArFit& OrderSelection::selected() const {
  for (const auto& s : scores) {
    if (s.p == p) return s.fit;
  }
  throw Error(ErrorKind::InvalidConfig, "no fit stored for the selected order");
}

OrderSelection bic_order_select(std::span<const double> y, std::size_t p_max, std::size_t q,
                                std::size_t r_bar) {
  if (p_max < 1) throw Error(ErrorKind::InvalidConfig, "p_max must be at least 1");
  if (p_max > kMaxArOrder) {
    throw Error(ErrorKind::InvalidConfig, "p_max = " + std::to_string(p_max) +
                                              " exceeds the cap " + std::to_string(kMaxArOrder));
  }
  const double T = static_cast<double>(y.size());
  OrderSelection out;
  double best = std::numeric_limits<double>::infinity();
  ErrorKind last_kind = ErrorKind::InvalidConfig;
  for (std::size_t p = 1; p <= p_max; ++p) {
    try {
      ArFit fit = averaged_ar_fit(y, p, q, r_bar);
      if (!(fit.nu2 > 0.0)) {
        throw Error(ErrorKind::NonPositiveSigma, "innovation variance is not positive");
      }
      const double bic = T * std::log(fit.nu2) + static_cast<double>(p) * std::log(T);
      if (bic < best) {
        best = bic;
        out.p = p;
      }
      out.scores.push_back({p, bic, std::move(fit)});
    } catch (const Error& err) {
      last_kind = err.kind();
      out.failures.push_back({p, err.what()});
    }
  }
  if (out.scores.empty()) {
    throw Error(last_kind, "no AR order in 1.." + std::to_string(p_max) +
                               " could be fitted; last failure: " + out.failures.back().reason);
  }
  return out;
}

bool is_causal(std::span<const double> a) {
  std::vector<double> phi(a.begin(), a.end());
  for (double v : phi) {
    if (!std::isfinite(v)) return false;
  }
  for (std::size_t k = phi.size(); k >= 1; --k) {
    const double kappa = phi[k - 1];
    if (!(std::abs(kappa) < 1.0)) return false;
    const double denom = 1.0 - kappa * kappa;
    std::vector<double> next(k - 1);
    for (std::size_t j = 1; j < k; ++j) next[j - 1] = (phi[j - 1] + kappa * phi[k - j - 1]) / denom;
    phi = std::move(next);
  }
  return true;
}

}  // namespace mstrend
