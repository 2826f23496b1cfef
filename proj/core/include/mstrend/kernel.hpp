#pragma once

#include <string_view>

namespace mstrend {

/// Smoothing kernel with support [-1, 1].
///
/// Implementations must be non-negative, symmetric, integrate to one and be
/// Lipschitz continuous. The test suite checks these properties for every
/// kernel it knows about.
class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual double operator()(double v) const noexcept = 0;
  virtual std::string_view name() const noexcept = 0;
};

/// 0.75 (1 - v^2) on [-1, 1], zero outside. NaN propagates.
double epanechnikov(double v) noexcept;

class EpanechnikovKernel final : public Kernel {
 public:
  double operator()(double v) const noexcept override { return epanechnikov(v); }
  std::string_view name() const noexcept override { return "epanechnikov"; }
};

const Kernel& default_kernel() noexcept;

}  // namespace mstrend
