#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mstrend {

/// Largest AR order accepted by the estimators.
inline constexpr std::size_t kMaxArOrder = 20;

/// Sample autocovariances of the q-th differences D_t = y_t - y_{t-q}:
/// gamma(l) = (T-q)^{-1} sum_{t=q+l+1}^{T} D_t D_{t-l}, l = 0..max_lag.
/// The (T-q) normalization is used for every lag.
struct DifferenceCovariances {
  std::size_t T = 0;
  std::size_t q = 0;
  std::vector<double> gamma;

  /// gamma(|lag|).
  double at(long lag) const;
};

/// Throws InsufficientData unless q >= 1 and q + max_lag + 1 <= T.
DifferenceCovariances diff_autocovariances(std::span<const double> y, std::size_t q,
                                           std::size_t max_lag);

/// Pilot AR estimate from the order-q difference Yule-Walker system
/// Gamma_q a = gamma_q. Requires 1 <= p < q and p <= kMaxArOrder.
std::vector<double> pilot_ar(std::span<const double> y, std::size_t p, std::size_t q);

/// MA(infinity) coefficients c_0..c_{k_max} of the AR model with coefficients a:
/// c_0 = 1, c_k = sum_{j=1}^{min(p,k)} a_j c_{k-j}.
std::vector<double> ma_coefficients(std::span<const double> a, std::size_t k_max);

/// (2T)^{-1} sum_t r_t^2 with first-difference residuals
/// r_t = dy_t - sum_j a_j dy_{t-j}, summed over every t where all differences exist.
double innovation_variance(std::span<const double> y, std::span<const double> a);

/// Corrected small-order estimate Gamma_r^{-1} (gamma_r + nu2 c_r), where
/// c_r = (c_{r-1}, ..., c_{r-p}) comes from the pilot coefficients (c_k = 0 for k < 0).
std::vector<double> refined_ar(std::span<const double> y, std::size_t p,
                               std::span<const double> pilot, double nu2_tilde, std::size_t r);

/// nu2 / (1 - sum a)^2. Throws ExplosiveFit if |1 - sum a| < 1e-8.
double long_run_variance_from_ar(std::span<const double> a, double nu2);

struct ArFit {
  std::size_t p = 0;
  std::vector<double> a;        ///< averaged estimate
  double nu2 = 0.0;             ///< innovation variance from the averaged estimate
  double sigma2 = 0.0;          ///< long-run variance
  std::size_t q = 25;
  std::size_t r_bar = 10;
  std::vector<double> pilot;    ///< pilot estimate from order-q differences
  double nu2_pilot = 0.0;
};

/// Pilot fit, then the average of the refined estimates for r = 1..r_bar, then
/// the innovation and long-run variances.
ArFit averaged_ar_fit(std::span<const double> y, std::size_t p, std::size_t q = 25,
                      std::size_t r_bar = 10);

enum class LagWindow { Bartlett, Parzen };

/// W(x) on [-1, 1], zero outside.
double lag_window(LagWindow window, double x) noexcept;

std::string to_string(LagWindow window);
LagWindow parse_lag_window(const std::string& name);

struct HacConfig {
  std::size_t q = 25;   ///< difference order for the variance estimate
  std::size_t b = 5;    ///< lag-window bandwidth
  LagWindow window = LagWindow::Bartlett;

  /// Throws InvalidConfig unless 1 <= b < q < T/2.
  void validate(std::size_t T) const;
};

/// Difference-based HAC estimate sum_{|l| <= b} W(l/b) gamma_eps(l).
double hac_estimate(std::span<const double> y, const HacConfig& cfg);

struct OracleAr1 {
  double a = 0.0;
  double nu2 = 0.0;
  double sigma2 = 0.0;
  bool near_unit_root = false;   ///< |1 - a| < 1e-8 or |a| >= 1
};

/// AR(1) fit to directly observed errors by conditional least squares, residual
/// variance over T-1 and the long-run variance map.
OracleAr1 oracle_ar1(std::span<const double> errors);

struct OrderScore {
  std::size_t p = 0;
  double bic = 0.0;
  ArFit fit;
};

struct OrderFailure {
  std::size_t p = 0;
  std::string reason;
};

struct OrderSelection {
  std::size_t p = 0;
  std::vector<OrderScore> scores;
  std::vector<OrderFailure> failures;

  const ArFit& selected() const;
};

/// Fits p = 1..p_max and minimizes T log(nu2_p) + p log T (ties to the smaller p).
/// Orders whose fit throws are skipped and listed in failures; throws the last
/// failure if every order fails.
OrderSelection bic_order_select(std::span<const double> y, std::size_t p_max, std::size_t q = 25,
                                std::size_t r_bar = 10);

/// True if 1 - sum_j a_j z^j has no root in the closed unit disc (step-down test).
bool is_causal(std::span<const double> a);

}  // namespace mstrend
