#include "mstrend/gauss_quantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mstrend/error.hpp"
#include "mstrend/parallel.hpp"
#include "mstrend/rng.hpp"

namespace mstrend {

void QuantileConfig::validate() const {
  std::ostringstream problems;
  if (n_sims < 100) problems << " n_sims = " << n_sims << " is below 100;";
  if (alphas.empty()) problems << " no significance levels given;";
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) problems << " alpha = " << a << " outside (0,1);";
  }
  const std::string text = problems.str();
  if (!text.empty()) throw Error(ErrorKind::InvalidConfig, "quantile config:" + text);
}

double gaussian_statistic_draw(const WeightTable& table, std::span<const double> noise) {
  double best = -std::numeric_limits<double>::infinity();
  for (const WeightEntry& e : table.entries()) {
    best = std::max(best, std::abs(e.weights.dot(noise)) - e.lambda);
  }
  return best;
}

double upper_order_statistic(std::span<const double> sorted, double alpha) {
  if (sorted.empty()) throw Error(ErrorKind::InvalidConfig, "no draws to take a quantile of");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " outside (0,1)";
    throw Error(ErrorKind::InvalidConfig, msg.str());
  }
  const double n = static_cast<double>(sorted.size());
  // The small offset keeps (1 - alpha) n = 950 from rounding up to 951.
  auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * n - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

CriticalValues::CriticalValues(std::vector<double> draws, std::span<const double> alphas)
    : draws_(std::move(draws)), sorted_(draws_) {
  std::sort(sorted_.begin(), sorted_.end());
  std::vector<double> levels(alphas.begin(), alphas.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (double a : levels) quantiles_.emplace_back(a, upper_order_statistic(sorted_, a));
}

double CriticalValues::quantile(double alpha) const { return upper_order_statistic(sorted_, alpha); }

CriticalValues simulate_critical_values(const WeightTable& table, const QuantileConfig& cfg,
                                        unsigned workers) {
  cfg.validate();
  std::vector<double> draws(cfg.n_sims);
  const std::size_t T = table.T();
  const std::size_t threads = std::max(1u, workers);
  // One noise buffer per chunk of replicates.
  const std::size_t chunks = std::min(threads, cfg.n_sims);
  const std::size_t per = (cfg.n_sims + chunks - 1) / chunks;
  parallel_for(chunks, workers, [&](std::size_t c) {
    std::vector<double> noise(T);
    const std::size_t lo = c * per;
    const std::size_t hi = std::min(cfg.n_sims, lo + per);
    for (std::size_t i = lo; i < hi; ++i) {
      NormalStream stream(cfg.seed, stream_id(StreamTag::GaussianReference, i));
      stream.fill(noise);
      draws[i] = gaussian_statistic_draw(table, noise);
    }
  });
  return CriticalValues(std::move(draws), cfg.alphas);
}

}  // namespace mstrend
