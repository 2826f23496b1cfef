#pragma once

// Straightforward reimplementations used as references in tests. They follow the
// textbook definitions directly and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline double epanechnikov(double x) { return std::abs(x) <= 1.0 ? 0.75 * (1.0 - x * x) : 0.0; }

/// Normalized local linear weights over all t = 1..T, from the moment sums.
inline std::vector<double> weights(std::size_t T, double u, double h) {
  const double n = static_cast<double>(T);
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t t = 1; t <= T; ++t) {
    const double x = (static_cast<double>(t) / n - u) / h;
    s0 += epanechnikov(x) / (n * h);
    s1 += epanechnikov(x) * x / (n * h);
  }
  std::vector<double> lam(T);
  double ss = 0.0;
  for (std::size_t t = 1; t <= T; ++t) {
    const double x = (static_cast<double>(t) / n - u) / h;
    lam[t - 1] = epanechnikov(x) * (s0 * x - s1);
    ss += lam[t - 1] * lam[t - 1];
  }
  for (double& v : lam) v /= std::sqrt(ss);
  return lam;
}

inline double lambda(double h) { return std::sqrt(2.0 * std::log(1.0 / (2.0 * h))); }

struct Interval {
  std::int64_t lo, hi;
};

/// Indices of intervals that contain no other member, by pairwise comparison.
inline std::vector<std::size_t> minimal(const std::vector<Interval>& in) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < in.size() && keep; ++j) {
      if (i == j) continue;
      const bool contains = in[i].lo <= in[j].lo && in[j].hi <= in[i].hi;
      const bool equal = in[i].lo == in[j].lo && in[i].hi == in[j].hi;
      if (contains && !equal) keep = false;
    }
    if (keep) out.push_back(i);
  }
  return out;
}

/// Gaussian AR(1) path with a std::mt19937_64 source, independent of the library RNG.
inline std::vector<double> ar1_path(std::size_t T, double a, double nu2, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> e(T);
  e[0] = std::sqrt(nu2 / (1.0 - a * a)) * z(gen);
  for (std::size_t t = 1; t < T; ++t) e[t] = a * e[t - 1] + std::sqrt(nu2) * z(gen);
  return e;
}

}  // namespace oracle
