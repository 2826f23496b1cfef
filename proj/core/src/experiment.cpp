#include "mstrend/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "mstrend/error.hpp"
#include "mstrend/parallel.hpp"
#include "mstrend/sizer.hpp"

namespace mstrend {
namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// Space-separated list for the spec echo.
template <class Range, class Format>
std::string join(const Range& items, Format format) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ' ';
    out += format(item);
  }
  return out;
}

std::string to_text(double v) { return fmt(v); }
std::string to_text(std::size_t v) { return std::to_string(v); }
std::string to_text(const NoiseSpec& n) { return n.to_string(); }
std::string to_text(const TrendSpec& t) { return t.to_string(); }

template <class Range>
std::string join(const Range& items) {
  return join(items, [](const auto& item) { return to_text(item); });
}

std::string alpha_key(const std::string& prefix, double alpha) { return prefix + "@" + fmt(alpha); }

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Coverage of R = (0.4, 0.6) minus the single point 0.5, which has measure zero.
constexpr double kRegionLo = 0.4;
constexpr double kRegionHi = 0.6;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// ---------------------------------------------------------------------------
// Spec file parsing.

class SpecReader {
 public:
  explicit SpecReader(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) {
        problem("line " + std::to_string(lineno) + ": expected 'key = value'");
        continue;
      }
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty()) {
        problem("line " + std::to_string(lineno) + ": empty key");
        continue;
      }
      if (values_.count(key)) {
        problem("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        continue;
      }
      values_[key] = value;
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::vector<std::string> list(const std::string& key) {
    used_.insert(key);
    std::vector<std::string> out;
    const auto it = values_.find(key);
    if (it == values_.end()) return out;
    std::string item;
    for (char c : it->second + " ") {
      if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
        if (!item.empty()) out.push_back(item);
        item.clear();
      } else {
        item += c;
      }
    }
    return out;
  }

  double real(const std::string& key, double fallback) {
    if (!has(key)) {
      used_.insert(key);
      return fallback;
    }
    const auto v = reals(key);
    if (v.size() != 1) {
      problem(key + ": expected one number");
      return fallback;
    }
    return v[0];
  }

  std::vector<double> reals(const std::string& key) {
    std::vector<double> out;
    for (const std::string& s : list(key)) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        out.push_back(v);
      } catch (const std::exception&) {
        problem(key + ": '" + s + "' is not a number");
      }
    }
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key) {
    std::vector<std::size_t> out;
    for (const std::string& s : list(key)) {
      try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size() || v < 0) throw std::invalid_argument(s);
        out.push_back(static_cast<std::size_t>(v));
      } catch (const std::exception&) {
        problem(key + ": '" + s + "' is not a non-negative integer");
      }
    }
    return out;
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) {
      used_.insert(key);
      return fallback;
    }
    const auto v = counts(key);
    if (v.size() != 1) {
      problem(key + ": expected one integer");
      return fallback;
    }
    return v[0];
  }

  bool flag(const std::string& key, bool fallback) {
    const std::string v = text(key, fallback ? "true" : "false");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    problem(key + ": expected true or false, got '" + v + "'");
    return fallback;
  }

  template <class Fn>
  void guarded(Fn&& fn) {
    try {
      fn();
    } catch (const Error& err) {
      problem(err.what());
    }
  }

  void problem(const std::string& msg) { problems_.push_back(msg); }

  void finish() {
    for (const auto& [key, value] : values_) {
      if (!used_.count(key)) problem("unknown key '" + key + "'");
    }
    if (problems_.empty()) return;
    std::string msg = "experiment spec has " + std::to_string(problems_.size()) + " problem(s):";
    for (const auto& p : problems_) msg += "\n  - " + p;
    throw Error(ErrorKind::InvalidConfig, msg);
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
  std::vector<std::string> problems_;
};

std::vector<NoiseSpec> read_noise(SpecReader& r) {
  std::vector<NoiseSpec> out;
  for (const std::string& s : r.list("noise")) {
    r.guarded([&] { out.push_back(NoiseSpec::parse(s)); });
  }
  if (out.empty()) r.problem("noise: at least one noise specification is required");
  return out;
}

ExperimentLrv read_lrv(SpecReader& r) {
  ExperimentLrv lrv;
  const std::string kind = r.text("lrv", "ar");
  if (kind == "ar") {
    lrv.kind = ExperimentLrv::Kind::Ar;
  } else if (kind == "hac") {
    lrv.kind = ExperimentLrv::Kind::Hac;
  } else if (kind == "known") {
    lrv.kind = ExperimentLrv::Kind::Known;
  } else {
    r.problem("lrv: expected ar, hac or known, got '" + kind + "'");
  }
  lrv.q = r.count("q", 25);
  lrv.r_bar = r.count("rbar", 10);
  lrv.hac.q = lrv.q;
  lrv.hac.b = r.count("hac_b", lrv.hac.b);
  r.guarded([&] { lrv.hac.window = parse_lag_window(r.text("hac_window", "bartlett")); });
  return lrv;
}

ClusterRule read_cluster(SpecReader& r) {
  const std::string v = r.text("cluster", "fixed");
  if (v == "fixed") return ClusterRule::Fixed;
  if (v == "bandwidth") return ClusterRule::Bandwidth;
  r.problem("cluster: expected fixed or bandwidth, got '" + v + "'");
  return ClusterRule::Fixed;
}

const char* cluster_name(ClusterRule rule) {
  return rule == ClusterRule::Fixed ? "fixed" : "bandwidth";
}

void check_alphas(SpecReader& r, const std::vector<double>& alphas) {
  if (alphas.empty()) r.problem("alpha: at least one level is required");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) r.problem("alpha: " + fmt(a) + " outside (0,1)");
  }
}

void check_common(SpecReader& r, std::size_t S, std::size_t sims) {
  if (S < 1) r.problem("S: at least one replicate is required");
  if (sims < 100) r.problem("sims: at least 100 Gaussian simulations are required");
}

// ---------------------------------------------------------------------------
// Experiments.

struct CellCounts {
  std::vector<std::size_t> ms;
  std::vector<std::size_t> sizer;
  std::size_t failures = 0;
};

double noise_sd(const NoiseSpec& n) { return std::sqrt(n.variance()); }

LrvMethod method_for(const ExperimentLrv& lrv, const NoiseSpec& noise) {
  switch (lrv.kind) {
    case ExperimentLrv::Kind::Ar:
      return ArMethod{noise.a.size(), lrv.q, lrv.r_bar, 8};
    case ExperimentLrv::Kind::Hac:
      return lrv.hac;
    case ExperimentLrv::Kind::Known:
      return FixedVariance{noise.long_run_variance()};
  }
  return FixedVariance{noise.long_run_variance()};
}

}  // namespace

double ReportCell::value(const std::string& key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return v;
  }
  throw Error(ErrorKind::InvalidConfig, "report cell has no value '" + key + "'");
}

std::string ExperimentReport::to_csv() const {
  std::vector<std::string> label_keys, value_keys;
  for (const auto& c : cells) {
    for (const auto& [k, v] : c.labels)
      if (std::find(label_keys.begin(), label_keys.end(), k) == label_keys.end()) label_keys.push_back(k);
    for (const auto& [k, v] : c.values)
      if (std::find(value_keys.begin(), value_keys.end(), k) == value_keys.end()) value_keys.push_back(k);
  }
  std::ostringstream out;
  bool first = true;
  for (const auto& k : label_keys) {
    out << (first ? "" : ",") << csv_escape(k);
    first = false;
  }
  out << (first ? "" : ",") << "S";
  for (const auto& k : value_keys) out << "," << csv_escape(k);
  out << "\n";
  for (const auto& c : cells) {
    first = true;
    for (const auto& k : label_keys) {
      std::string v;
      for (const auto& [lk, lv] : c.labels)
        if (lk == k) v = lv;
      out << (first ? "" : ",") << csv_escape(v);
      first = false;
    }
    out << (first ? "" : ",") << c.S;
    for (const auto& k : value_keys) {
      out << ",";
      for (const auto& [vk, vv] : c.values)
        if (vk == k) out << fmt(vv);
    }
    out << "\n";
  }
  return out.str();
}

std::string ExperimentReport::regions_csv() const {
  std::ostringstream out;
  out << "cell,replicate,method,piece,lo,hi,coverage,excess\n";
  for (const auto& r : regions) {
    const double n = static_cast<double>(r.T);
    if (r.pieces.empty()) {
      out << r.cell << "," << r.replicate << "," << r.method << ",,,," << fmt(r.coverage) << ","
          << fmt(r.excess) << "\n";
    }
    for (std::size_t k = 0; k < r.pieces.size(); ++k) {
      out << r.cell << "," << r.replicate << "," << r.method << "," << k << ","
          << fmt(static_cast<double>(r.pieces[k].lo) / n) << ","
          << fmt(static_cast<double>(r.pieces[k].hi) / n) << "," << fmt(r.coverage) << ","
          << fmt(r.excess) << "\n";
    }
  }
  return out.str();
}

std::string ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["experiment"] = experiment;
  j["seed"] = seed;
  auto& params = j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : parameters) params[k] = v;
  auto& jc = j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json cell;
    for (const auto& [k, v] : c.labels) cell["labels"][k] = v;
    cell["S"] = c.S;
    for (const auto& [k, v] : c.values) cell["values"][k] = v;
    jc.push_back(std::move(cell));
  }
  j["region_records"] = regions.size();
  j["notes"] = notes;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

ExperimentSpec parse_experiment_spec(const std::string& text) {
  SpecReader r(text);
  const std::string kind = r.text("experiment", "");
  if (kind == "size_power") {
    SizePowerSpec s;
    s.T = r.has("T") ? r.counts("T") : s.T;
    for (std::size_t T : s.T) {
      if (T < 20) r.problem("T: " + std::to_string(T) + " is below the minimum of 20");
    }
    s.noise = read_noise(r);
    if (r.has("trend")) {
      s.trends.clear();
      for (const std::string& t : r.list("trend")) r.guarded([&] { s.trends.push_back(TrendSpec::parse(t)); });
    }
    if (r.has("alpha")) s.alphas = r.reals("alpha");
    check_alphas(r, s.alphas);
    s.S = r.count("S", s.S);
    s.lrv = read_lrv(r);
    s.sims = r.count("sims", s.sims);
    s.seed = r.count("seed", s.seed);
    s.sizer = r.flag("sizer", s.sizer);
    s.theta = r.real("theta", s.theta);
    if (!(s.theta > 0.0)) r.problem("theta: must be positive");
    s.cluster_rule = read_cluster(r);
    check_common(r, s.S, s.sims);
    if (s.lrv.kind == ExperimentLrv::Kind::Ar) {
      for (const auto& n : s.noise) {
        if (n.a.empty()) r.problem("lrv = ar needs AR noise; '" + n.to_string() + "' is white noise");
      }
    }
    if (s.sizer && s.lrv.kind != ExperimentLrv::Kind::Known) {
      r.problem("sizer = true compares under a known autocovariance; set lrv = known");
    }
    r.finish();
    return s;
  }
  if (kind == "region_recovery") {
    RegionSpec s;
    s.T = r.count("T", s.T);
    if (s.T < 20) r.problem("T: below the minimum of 20");
    s.noise = read_noise(r);
    r.guarded([&] { s.trend = TrendSpec::parse(r.text("trend", "bump")); });
    s.alpha = r.real("alpha", s.alpha);
    check_alphas(r, {s.alpha});
    s.S = r.count("S", s.S);
    s.sims = r.count("sims", s.sims);
    s.seed = r.count("seed", s.seed);
    s.theta = r.real("theta", s.theta);
    if (!(s.theta > 0.0)) r.problem("theta: must be positive");
    s.cluster_rule = read_cluster(r);
    check_common(r, s.S, s.sims);
    r.finish();
    return s;
  }
  if (kind == "lrv_mse") {
    LrvMseSpec s;
    s.T = r.count("T", s.T);
    if (r.has("a1")) s.a1 = r.reals("a1");
    if (r.has("s_beta")) s.s_beta = r.reals("s_beta");
    s.nu2 = r.real("nu2", s.nu2);
    s.S = r.count("S", s.S);
    if (r.has("q")) s.q = r.counts("q");
    if (r.has("rbar")) s.r_bar = r.counts("rbar");
    s.seed = r.count("seed", s.seed);
    for (double a : s.a1) {
      if (!(std::abs(a) < 1.0)) r.problem("a1: " + fmt(a) + " is not inside (-1, 1)");
    }
    if (!(s.nu2 > 0.0)) r.problem("nu2: must be positive; the AR fit is undefined on noiseless data");
    if (s.S < 1) r.problem("S: at least one replicate is required");
    for (std::size_t q : s.q) {
      if (q < 2 || 2 * q >= s.T) r.problem("q: " + std::to_string(q) + " must lie in [2, T/2)");
    }
    for (std::size_t rb : s.r_bar) {
      if (rb < 1) r.problem("rbar: must be at least 1");
    }
    r.finish();
    return s;
  }
  if (kind.empty()) {
    r.problem("experiment: missing (size_power, region_recovery or lrv_mse)");
  } else {
    r.problem("experiment: unknown kind '" + kind + "'");
  }
  r.finish();
  throw Error(ErrorKind::InvalidConfig, "unreachable");
}

ExperimentReport size_power_experiment(const SizePowerSpec& spec, unsigned workers) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.experiment = "size_power";
  rep.seed = spec.seed;
  rep.parameters = {{"T", join(spec.T)},
                    {"noise", join(spec.noise)},
                    {"trend", join(spec.trends)},
                    {"alpha", join(spec.alphas)},
                    {"S", std::to_string(spec.S)},
                    {"sims", std::to_string(spec.sims)},
                    {"lrv", spec.lrv.kind == ExperimentLrv::Kind::Ar    ? "ar"
                            : spec.lrv.kind == ExperimentLrv::Kind::Hac ? "hac"
                                                                       : "known"},
                    {"q", std::to_string(spec.lrv.q)},
                    {"rbar", std::to_string(spec.lrv.r_bar)},
                    {"hac_b", std::to_string(spec.lrv.hac.b)},
                    {"hac_window", to_string(spec.lrv.hac.window)},
                    {"sizer", spec.sizer ? "true" : "false"},
                    {"theta", fmt(spec.theta)},
                    {"cluster", cluster_name(spec.cluster_rule)}};
  for (const auto& n : spec.noise) n.validate();

  QuantileConfig qcfg;
  qcfg.n_sims = spec.sims;
  qcfg.seed = spec.seed;
  qcfg.alphas = spec.alphas;
  const std::size_t A = spec.alphas.size();

  for (std::size_t T : spec.T) {
    const LocationScaleGrid grid = LocationScaleGrid::default_grid(T);
    const PreparedTest prepared(grid, qcfg, workers);
    for (const NoiseSpec& noise : spec.noise) {
      const LrvMethod method = method_for(spec.lrv, noise);
      std::vector<SizerPlan> plans;
      if (spec.sizer) {
        const std::vector<double> gamma = noise.autocovariance(T);
        for (double a : spec.alphas) {
          SizerConfig sc{.gamma = gamma, .alpha = a, .theta = spec.theta,
                         .cluster_rule = spec.cluster_rule, .grid = grid};
          plans.emplace_back(sc, default_kernel(), workers);
        }
      }
      for (const TrendSpec& trend : spec.trends) {
        // Per replicate: bit k set if the multiscale test rejects at alphas[k],
        // bit A + k for SiZer; -1 marks a failed variance estimate.
        std::vector<std::int64_t> outcome(spec.S, 0);
        parallel_for(spec.S, workers, [&](std::size_t s) {
          const SimulatedSeries series = gen_series(T, trend, noise, spec.seed, s);
          double sigma2 = 0.0;
          try {
            sigma2 = estimate_long_run_variance(series.y, method).sigma2;
          } catch (const Error& err) {
            if (err.kind() == ErrorKind::InvalidConfig) throw;
            outcome[s] = -1;
            return;
          }
          const std::vector<bool> dec = prepared.decide(series.y, spec.alphas, sigma2);
          std::int64_t bits = 0;
          for (std::size_t k = 0; k < A; ++k)
            if (dec[k]) bits |= std::int64_t{1} << k;
          for (std::size_t k = 0; k < plans.size(); ++k)
            if (plans[k].evaluate(series.y).reject) bits |= std::int64_t{1} << (A + k);
          outcome[s] = bits;
        });
        ReportCell cell;
        cell.labels = {{"T", std::to_string(T)}, {"noise", noise.to_string()}, {"trend", trend.to_string()}};
        std::size_t failures = 0;
        std::vector<std::size_t> ms(A, 0), sz(A, 0);
        for (std::int64_t b : outcome) {
          if (b < 0) {
            ++failures;
            continue;
          }
          for (std::size_t k = 0; k < A; ++k) {
            if (b & (std::int64_t{1} << k)) ++ms[k];
            if (b & (std::int64_t{1} << (A + k))) ++sz[k];
          }
        }
        const std::size_t used = spec.S - failures;
        cell.S = spec.S;
        for (std::size_t k = 0; k < A; ++k) {
          cell.values.emplace_back(alpha_key("ms", spec.alphas[k]),
                                   used ? static_cast<double>(ms[k]) / static_cast<double>(used) : 0.0);
        }
        if (spec.sizer) {
          for (std::size_t k = 0; k < A; ++k) {
            cell.values.emplace_back(alpha_key("sizer", spec.alphas[k]),
                                     used ? static_cast<double>(sz[k]) / static_cast<double>(used) : 0.0);
          }
        }
        cell.values.emplace_back("lrv_failures", static_cast<double>(failures));
        if (failures > 0) {
          rep.notes.push_back(std::to_string(failures) + " replicate(s) of T=" + std::to_string(T) +
                              " " + noise.to_string() + " " + trend.to_string() +
                              " had a failed variance estimate and were excluded");
        }
        rep.cells.push_back(std::move(cell));
      }
    }
  }
  rep.wall_seconds = elapsed(start);
  return rep;
}

ExperimentReport region_recovery_experiment(const RegionSpec& spec, unsigned workers) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.experiment = "region_recovery";
  rep.seed = spec.seed;
  rep.parameters = {{"T", std::to_string(spec.T)},  {"noise", join(spec.noise)},
                    {"trend", spec.trend.to_string()},
                    {"alpha", fmt(spec.alpha)},      {"S", std::to_string(spec.S)},
                    {"sims", std::to_string(spec.sims)}, {"theta", fmt(spec.theta)},
                    {"cluster", cluster_name(spec.cluster_rule)},
                    {"lrv", "known"}};
  QuantileConfig qcfg;
  qcfg.n_sims = spec.sims;
  qcfg.seed = spec.seed;
  qcfg.alphas = {spec.alpha};
  const LocationScaleGrid grid = LocationScaleGrid::default_grid(spec.T);
  const PreparedTest prepared(grid, qcfg, workers);

  for (std::size_t c = 0; c < spec.noise.size(); ++c) {
    const NoiseSpec& noise = spec.noise[c];
    const double sigma2 = noise.long_run_variance();
    const SizerPlan plan(SizerConfig{.gamma = noise.autocovariance(spec.T),
                                     .alpha = spec.alpha,
                                     .theta = spec.theta,
                                     .cluster_rule = spec.cluster_rule,
                                     .grid = grid},
                         default_kernel(), workers);
    std::vector<RegionRecord> ms(spec.S), sz(spec.S);
    parallel_for(spec.S, workers, [&](std::size_t s) {
      const SimulatedSeries series = gen_series(spec.T, spec.trend, noise, spec.seed, s);
      const TestOutcome out = prepared.evaluate(series.y, spec.alpha, sigma2);
      std::vector<Interval> minimal;
      for (const auto& r : out.minimal_set(SetKind::Both)) minimal.push_back(r.interval);
      const auto score = [&](RegionRecord& rec, std::vector<Interval> pieces, const char* method) {
        rec.cell = c;
        rec.replicate = s;
        rec.method = method;
        rec.T = spec.T;
        rec.pieces = interval_union(pieces);
        rec.coverage = overlap_measure(rec.pieces, kRegionLo, kRegionHi, spec.T);
        rec.excess = overlap_measure(rec.pieces, 0.0, 1.0, spec.T) - rec.coverage;
      };
      score(ms[s], std::move(minimal), "multiscale");
      score(sz[s], plan.evaluate(series.y).region, "sizer");
    });
    ReportCell cell;
    cell.labels = {{"T", std::to_string(spec.T)}, {"noise", noise.to_string()}, {"trend", spec.trend.to_string()}};
    cell.S = spec.S;
    for (const auto* recs : {&ms, &sz}) {
      const std::string m = recs->front().method;
      double cov = 0.0, exc = 0.0, hit = 0.0;
      for (const auto& r : *recs) {
        cov += r.coverage;
        exc += r.excess;
        if (!r.pieces.empty()) hit += 1.0;
      }
      const double n = static_cast<double>(spec.S);
      cell.values.emplace_back(m + "_coverage", cov / n);
      cell.values.emplace_back(m + "_excess", exc / n);
      cell.values.emplace_back(m + "_nonempty", hit / n);
    }
    rep.cells.push_back(std::move(cell));
    for (std::size_t s = 0; s < spec.S; ++s) {
      rep.regions.push_back(std::move(ms[s]));
      rep.regions.push_back(std::move(sz[s]));
    }
  }
  rep.wall_seconds = elapsed(start);
  return rep;
}

ExperimentReport lrv_mse_experiment(const LrvMseSpec& spec, unsigned workers) {
  const auto start = Clock::now();
  if (!(spec.nu2 > 0.0)) {
    throw Error(ErrorKind::NonStationarySpec,
                "innovation variance nu2 = 0 makes the errors deterministic; the AR fit is undefined");
  }
  ExperimentReport rep;
  rep.experiment = "lrv_mse";
  rep.seed = spec.seed;
  rep.parameters = {{"T", std::to_string(spec.T)}, {"a1", join(spec.a1)},
                    {"s_beta", join(spec.s_beta)}, {"nu2", fmt(spec.nu2)},
                    {"S", std::to_string(spec.S)}, {"q", join(spec.q)},
                    {"rbar", join(spec.r_bar)}};

  for (double a1 : spec.a1) {
    const NoiseSpec noise{{a1}, spec.nu2};
    noise.validate();
    const double sigma2_true = noise.long_run_variance();
    for (double sb : spec.s_beta) {
      const TrendSpec trend{TrendSpec::Kind::Linear, sb * noise_sd(noise)};
      const std::size_t combos = spec.q.size() * spec.r_bar.size();
      struct Draw {
        double oracle_a = 0.0, oracle_s2 = 0.0;
        std::vector<double> a, s2;
        std::vector<bool> ok;
      };
      std::vector<Draw> draws(spec.S);
      parallel_for(spec.S, workers, [&](std::size_t s) {
        const SimulatedSeries series = gen_series(spec.T, trend, noise, spec.seed, s);
        const OracleAr1 o = oracle_ar1(series.errors);
        Draw& d = draws[s];
        d.oracle_a = o.a;
        d.oracle_s2 = o.sigma2;
        d.a.assign(combos, 0.0);
        d.s2.assign(combos, 0.0);
        d.ok.assign(combos, false);
        std::size_t k = 0;
        for (std::size_t q : spec.q) {
          for (std::size_t rb : spec.r_bar) {
            try {
              const ArFit fit = averaged_ar_fit(series.y, 1, q, rb);
              d.a[k] = fit.a[0];
              d.s2[k] = fit.sigma2;
              d.ok[k] = true;
            } catch (const Error& err) {
              if (err.kind() == ErrorKind::InvalidConfig) throw;
            }
            ++k;
          }
        }
      });
      double oa = 0.0, os2 = 0.0;
      for (const Draw& d : draws) {
        oa += (d.oracle_a - a1) * (d.oracle_a - a1);
        os2 += (d.oracle_s2 - sigma2_true) * (d.oracle_s2 - sigma2_true);
      }
      const double n = static_cast<double>(spec.S);
      std::size_t k = 0;
      for (std::size_t q : spec.q) {
        for (std::size_t rb : spec.r_bar) {
          double ea = 0.0, es2 = 0.0, mean_a = 0.0;
          double min_a = std::numeric_limits<double>::infinity();
          double max_a = -std::numeric_limits<double>::infinity();
          std::size_t used = 0;
          for (const Draw& d : draws) {
            if (!d.ok[k]) continue;
            ++used;
            ea += (d.a[k] - a1) * (d.a[k] - a1);
            es2 += (d.s2[k] - sigma2_true) * (d.s2[k] - sigma2_true);
            mean_a += d.a[k];
            min_a = std::min(min_a, d.a[k]);
            max_a = std::max(max_a, d.a[k]);
          }
          const double m = used ? static_cast<double>(used) : std::nan("");
          ReportCell cell;
          cell.labels = {{"T", std::to_string(spec.T)},
                         {"a1", fmt(a1)},
                         {"s_beta", fmt(sb)},
                         {"q", std::to_string(q)},
                         {"rbar", std::to_string(rb)}};
          cell.S = spec.S;
          cell.values = {{"mse_a", ea / m},
                         {"mse_a_oracle", oa / n},
                         {"mse_sigma2", es2 / m},
                         {"mse_sigma2_oracle", os2 / n},
                         {"log_mse_sigma2", std::log(es2 / m)},
                         {"log_mse_sigma2_oracle", std::log(os2 / n)},
                         {"mean_a", mean_a / m},
                         {"min_a", min_a},
                         {"max_a", max_a},
                         {"failures", static_cast<double>(spec.S - used)}};
          rep.cells.push_back(std::move(cell));
          ++k;
        }
      }
    }
  }
  rep.wall_seconds = elapsed(start);
  return rep;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, unsigned workers) {
  return std::visit(
      [&](const auto& s) -> ExperimentReport {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, SizePowerSpec>) {
          return size_power_experiment(s, workers);
        } else if constexpr (std::is_same_v<S, RegionSpec>) {
          return region_recovery_experiment(s, workers);
        } else {
          return lrv_mse_experiment(s, workers);
        }
      },
      spec);
}

}  // namespace mstrend
