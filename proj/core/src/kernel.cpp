#include "mstrend/kernel.hpp"

#include <cmath>

namespace mstrend {

double epanechnikov(double v) noexcept {
  if (std::isnan(v)) return v;
  if (std::abs(v) > 1.0) return 0.0;
  return 0.75 * (1.0 - v * v);
}

const Kernel& default_kernel() noexcept {
  static const EpanechnikovKernel kernel;
  return kernel;
}

}  // namespace mstrend
