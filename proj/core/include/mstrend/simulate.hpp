#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mstrend/rng.hpp"

namespace mstrend {

/// Trend families used in the experiments.
struct TrendSpec {
  enum class Kind { Constant, Linear, CenteredLinear, BrokenLine, Bump };

  Kind kind = Kind::Constant;
  double param = 0.0;   ///< c for Constant, slope beta otherwise (unused for Bump)

  double operator()(double u) const noexcept;

  /// "constant:c", "linear:b", "centered_linear:b", "broken_line:b", "bump".
  static TrendSpec parse(const std::string& text);
  std::string to_string() const;
};

/// Gaussian AR(p) noise with p in {0, 1, 2}; p = 0 is white noise.
struct NoiseSpec {
  std::vector<double> a;
  double nu2 = 1.0;

  /// Throws NonStationarySpec for a non-stationary AR polynomial or p > 2, and
  /// InvalidConfig for nu2 < 0.
  void validate() const;

  double variance() const;
  /// nu2 / (1 - sum a)^2.
  double long_run_variance() const;
  /// gamma(0..n-1).
  std::vector<double> autocovariance(std::size_t n) const;

  /// "ar1:a[:nu2]", "ar2:a1:a2[:nu2]", "white[:nu2]".
  static NoiseSpec parse(const std::string& text);
  std::string to_string() const;
};

/// Number of discarded start-up steps for AR(2).
inline constexpr std::size_t kAr2BurnIn = 1000;

/// Stationary noise path of length T. AR(1) starts from N(0, nu2/(1-a^2)), AR(2)
/// after kAr2BurnIn discarded steps.
std::vector<double> gen_noise(std::size_t T, const NoiseSpec& noise, NormalStream& stream);

struct SimulatedSeries {
  std::vector<double> y;
  std::vector<double> errors;
};

/// y_t = m(t/T) + e_t with noise from NormalStream(seed, stream_id(Noise, replicate)).
SimulatedSeries gen_series(std::size_t T, const TrendSpec& trend, const NoiseSpec& noise,
                           std::uint64_t seed, std::uint64_t replicate = 0);

}  // namespace mstrend
