#pragma once

namespace mstrend {

double normal_cdf(double x) noexcept;

/// Standard normal quantile via Wichura's AS 241 (PPND16), relative accuracy
/// about 1e-16. Returns -inf / +inf at 0 / 1 and NaN outside [0, 1].
double normal_quantile(double p) noexcept;

/// Phi^{-1}(1 - tail) evaluated from the tail probability without forming
/// 1 - tail, so tiny tails keep full precision.
double normal_upper_quantile(double tail) noexcept;

}  // namespace mstrend
