#include "mstrend/linalg.hpp"

#include <cmath>
#include <utility>

#include "mstrend/error.hpp"

namespace mstrend {

std::vector<double> solve_linear(SquareMatrix a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (b.size() != n) {
    throw Error(ErrorKind::LengthMismatch, "right-hand side has length " +
                                               std::to_string(b.size()) + ", expected " +
                                               std::to_string(n));
  }
  std::vector<double> x(b.begin(), b.end());
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  const double tol = 1e-12 * scale;
  if (n > 0 && !(scale > 0.0)) throw Error(ErrorKind::SingularSystem, "zero matrix");

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (!(std::abs(a(piv, k)) > tol)) {
      throw Error(ErrorKind::SingularSystem,
                  "pivot " + std::to_string(k) + " below tolerance; matrix is singular");
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(x[k], x[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      x[i] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

}  // namespace mstrend
