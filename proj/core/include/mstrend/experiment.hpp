#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mstrend/inference.hpp"
#include "mstrend/intervals.hpp"
#include "mstrend/lrv.hpp"
#include "mstrend/simulate.hpp"
#include "mstrend/sizer.hpp"

namespace mstrend {

/// How the experiments obtain sigma^2: the AR pipeline with the true AR order,
/// the HAC estimator, or the analytic value of the noise spec.
struct ExperimentLrv {
  enum class Kind { Ar, Hac, Known };
  Kind kind = Kind::Ar;
  std::size_t q = 25;
  std::size_t r_bar = 10;
  HacConfig hac;
};

/// Rejection frequencies of the multiscale test (and optionally SiZer, with the
/// autocovariance treated as known) over T x noise x trend cells.
struct SizePowerSpec {
  std::vector<std::size_t> T{500};
  std::vector<NoiseSpec> noise;
  std::vector<TrendSpec> trends{TrendSpec{}};
  std::vector<double> alphas{0.01, 0.05, 0.10};
  std::size_t S = 1000;
  ExperimentLrv lrv;
  std::size_t sims = 1000;
  std::uint64_t seed = 1;
  bool sizer = false;
  double theta = 1.0;
  ClusterRule cluster_rule = ClusterRule::Fixed;
};

/// Recovery of the region where the bump trend moves, by the multiscale test
/// (known sigma^2) and SiZer.
struct RegionSpec {
  std::size_t T = 500;
  std::vector<NoiseSpec> noise;
  TrendSpec trend{TrendSpec::Kind::Bump, 0.0};
  double alpha = 0.05;
  std::size_t S = 100;
  std::size_t sims = 1000;
  std::uint64_t seed = 1;
  double theta = 1.0;
  ClusterRule cluster_rule = ClusterRule::Fixed;
};

/// MSE of the AR and long-run variance estimators against the error-observing
/// oracle, for m(u) = beta u with beta = s_beta sd(e).
struct LrvMseSpec {
  std::size_t T = 500;
  std::vector<double> a1{-0.95, -0.75, -0.5, -0.25, 0.25, 0.5, 0.75, 0.95};
  std::vector<double> s_beta{1.0, 10.0};
  double nu2 = 1.0;
  std::size_t S = 1000;
  std::vector<std::size_t> q{25};
  std::vector<std::size_t> r_bar{10};
  std::uint64_t seed = 1;
};

using ExperimentSpec = std::variant<SizePowerSpec, RegionSpec, LrvMseSpec>;

struct ReportCell {
  std::vector<std::pair<std::string, std::string>> labels;
  std::size_t S = 0;
  std::vector<std::pair<std::string, double>> values;

  double value(const std::string& key) const;
};

struct RegionRecord {
  std::size_t cell = 0;
  std::size_t replicate = 0;
  std::string method;
  std::size_t T = 0;
  std::vector<Interval> pieces;
  double coverage = 0.0;   ///< measure of region intersect R
  double excess = 0.0;     ///< measure of region minus R
};

struct ExperimentReport {
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> parameters;   ///< spec echo
  std::vector<ReportCell> cells;
  std::vector<RegionRecord> regions;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;

  /// One row per cell. Contains no timing, so it is byte-identical across
  /// worker counts.
  std::string to_csv() const;
  /// Per-replicate region pieces and scores.
  std::string regions_csv() const;
  /// Full metadata including the spec echo and wall time.
  std::string to_json() const;
};

/// key = value lines; '#' starts a comment; list values are separated by
/// whitespace or commas. Throws InvalidConfig listing every problem found.
ExperimentSpec parse_experiment_spec(const std::string& text);

ExperimentReport size_power_experiment(const SizePowerSpec& spec, unsigned workers = 1);
ExperimentReport region_recovery_experiment(const RegionSpec& spec, unsigned workers = 1);
ExperimentReport lrv_mse_experiment(const LrvMseSpec& spec, unsigned workers = 1);
ExperimentReport run_experiment(const ExperimentSpec& spec, unsigned workers = 1);

}  // namespace mstrend
