#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mstrend {

/// Dense row-major square matrix, sized for the small Yule-Walker systems.
class SquareMatrix {
 public:
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting. Throws
/// SingularSystem when a pivot falls below 1e-12 times the largest entry of A.
std::vector<double> solve_linear(SquareMatrix a, std::span<const double> b);

}  // namespace mstrend
