#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cli.hpp"
#include "mstrend/experiment.hpp"
#include "mstrend/inference.hpp"
#include "mstrend/parallel.hpp"
#include "mstrend/report.hpp"
#include "mstrend/simulate.hpp"
#include "mstrend/sizer.hpp"

namespace mstrend::cli {
namespace {

struct LrvFlags {
  std::vector<std::string> lrv{"ar"};
  std::string p = "1";
  std::size_t p_max = 8;
  std::size_t q = 25;
  std::size_t r_bar = 10;
  std::size_t hac_b = 5;
  std::string hac_window = "bartlett";
  std::optional<double> sigma2;
};

struct TestFlags {
  std::string input;
  double alpha = 0.05;
  std::string grid = "default";
  LrvFlags lrv;
  std::size_t sims = 1000;
  std::uint64_t seed = 0;
  std::optional<unsigned> workers;
  std::string out;
};

struct SimulateFlags {
  std::string spec;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out;
};

struct SizerFlags {
  std::string input;
  std::string noise;
  double alpha = 0.05;
  double theta = 1.0;
  std::string cluster = "fixed";
  std::size_t T = 500;
  std::string trend = "constant:0";
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  std::string grid = "default";
  std::optional<unsigned> workers;
  std::string out;
};

struct GenerateFlags {
  std::size_t T = 500;
  std::string trend = "constant:0";
  std::string noise = "ar1:0.25";
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  std::optional<long> start;
  std::string out;
};

void add_lrv_options(CLI::App* sub, LrvFlags& f) {
  sub->add_option("--lrv", f.lrv, "Variance estimator: ar, hac, or 'fixed VALUE'")
      ->expected(1, 2)
      ->capture_default_str();
  sub->add_option("--p", f.p, "AR order, or 'auto' for BIC selection")->capture_default_str();
  sub->add_option("--pmax", f.p_max, "Largest order tried by --p auto")->capture_default_str();
  sub->add_option("--q", f.q, "Difference order of the pilot / HAC estimate")->capture_default_str();
  sub->add_option("--rbar", f.r_bar, "Number of averaged small-order estimates")->capture_default_str();
  sub->add_option("--hac-b", f.hac_b, "HAC lag-window bandwidth")->capture_default_str();
  sub->add_option("--hac-window", f.hac_window, "HAC lag window: bartlett or parzen")
      ->capture_default_str();
  sub->add_option("--sigma2", f.sigma2, "Long-run variance for --lrv fixed");
}

std::size_t parse_order(const std::string& text) {
  if (text == "auto") return 0;
  try {
    std::size_t pos = 0;
    const long v = std::stol(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    if (v < 1) throw Error(ErrorKind::InvalidConfig, "--p must be at least 1 or 'auto'");
    if (static_cast<std::size_t>(v) > kMaxArOrder) {
      throw Error(ErrorKind::InvalidConfig, "--p " + text + " exceeds the supported maximum order " +
                                                std::to_string(kMaxArOrder));
    }
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidConfig, "--p expects a positive integer or 'auto', got '" + text + "'");
  }
}

LrvMethod build_lrv(const LrvFlags& f, std::size_t T) {
  const std::string& kind = f.lrv.at(0);
  if (kind == "fixed") {
    std::optional<double> value = f.sigma2;
    if (f.lrv.size() == 2) {
      try {
        std::size_t pos = 0;
        value = std::stod(f.lrv[1], &pos);
        if (pos != f.lrv[1].size()) throw std::invalid_argument(f.lrv[1]);
      } catch (const std::logic_error&) {
        throw Error(ErrorKind::InvalidConfig, "--lrv fixed expects a number, got '" + f.lrv[1] + "'");
      }
    }
    if (!value) throw Error(ErrorKind::InvalidConfig, "--lrv fixed needs a value (--lrv fixed 2.0)");
    if (!(*value > 0.0)) throw Error(ErrorKind::InvalidConfig, "--lrv fixed needs a positive value");
    return FixedVariance{*value};
  }
  if (f.lrv.size() != 1) throw Error(ErrorKind::InvalidConfig, "--lrv " + kind + " takes no value");
  if (kind == "ar") {
    const std::size_t p = parse_order(f.p);
    if (f.p_max < 1 || f.p_max > kMaxArOrder) {
      throw Error(ErrorKind::InvalidConfig, "--pmax must lie in 1.." + std::to_string(kMaxArOrder));
    }
    return ArMethod{p, f.q, f.r_bar, f.p_max};
  }
  if (kind == "hac") {
    HacConfig cfg{f.q, f.hac_b, parse_lag_window(f.hac_window)};
    cfg.validate(T);
    return cfg;
  }
  throw Error(ErrorKind::InvalidConfig, "--lrv must be ar, hac or fixed, got '" + kind + "'");
}

LocationScaleGrid load_grid(const std::string& spec, std::size_t T) {
  if (spec == "default") return LocationScaleGrid::default_grid(T);
  std::ifstream in(spec);
  if (!in) throw Error(ErrorKind::ParseError, spec + ": cannot open grid file");
  std::vector<std::pair<double, double>> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b) || (fields >> extra)) {
      throw Error(ErrorKind::ParseError, spec + ":" + std::to_string(lineno) + ": expected 'u h'");
    }
    try {
      std::size_t pa = 0, pb = 0;
      const double u = std::stod(a, &pa);
      const double h = std::stod(b, &pb);
      if (pa != a.size() || pb != b.size()) throw std::invalid_argument(line);
      pts.emplace_back(u, h);
    } catch (const std::logic_error&) {
      if (pts.empty() && lineno == 1) continue;   // header row
      throw Error(ErrorKind::ParseError, spec + ":" + std::to_string(lineno) + ": non-numeric grid point");
    }
  }
  return LocationScaleGrid::from_reals(T, pts);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidConfig, "cannot write " + path.string());
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

unsigned workers_or_default(const std::optional<unsigned>& w) {
  if (!w) return default_workers();
  if (*w < 1) throw Error(ErrorKind::InvalidConfig, "--workers must be at least 1");
  return *w;
}

int cmd_test(const TestFlags& f, std::ostream& out) {
  const InputDataset ds = read_dataset(f.input);
  const std::size_t T = ds.values.size();
  const LrvMethod lrv = build_lrv(f.lrv, T);
  const LocationScaleGrid grid = load_grid(f.grid, T);
  QuantileConfig qcfg;
  qcfg.n_sims = f.sims;
  qcfg.seed = f.seed;
  qcfg.alphas = {f.alpha};
  qcfg.validate();
  const TestOutcome outcome = run_test(ds.values, f.alpha, grid, lrv, qcfg, workers_or_default(f.workers));
  const std::string summary = format_summary(outcome, ds.start_year);
  out << summary;
  if (!f.out.empty()) {
    const std::filesystem::path dir(f.out);
    write_file(dir / "outcome.json", outcome_to_json(outcome, ds.start_year));
    write_file(dir / "points.csv", outcome_points_csv(outcome));
  }
  return kExitOk;
}

int cmd_lrv(const TestFlags& f, std::ostream& out) {
  const InputDataset ds = read_dataset(f.input);
  const LrvMethod lrv = build_lrv(f.lrv, ds.values.size());
  const LrvEstimate est = estimate_long_run_variance(ds.values, lrv);
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["method"] = describe(lrv);
  j["T"] = ds.values.size();
  j["sigma2"] = est.sigma2;
  if (est.ar_fit) j["ar_fit"] = nlohmann::ordered_json::parse(ar_fit_to_json(*est.ar_fit));
  if (est.order_selection) {
    auto& sel = j["order_selection"];
    sel["p"] = est.order_selection->p;
    for (const auto& s : est.order_selection->scores) sel["bic"].push_back({{"p", s.p}, {"bic", s.bic}});
    for (const auto& fl : est.order_selection->failures)
      sel["failures"].push_back({{"p", fl.p}, {"reason", fl.reason}});
  }
  out << j.dump(2) << "\n";
  if (!f.out.empty()) write_file(std::filesystem::path(f.out) / "lrv.json", j.dump(2) + "\n");
  return kExitOk;
}

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  ExperimentSpec spec = parse_experiment_spec(read_file(f.spec));
  if (f.seed) std::visit([&](auto& s) { s.seed = *f.seed; }, spec);
  const ExperimentReport rep = run_experiment(spec, workers_or_default(f.workers));
  if (f.out.empty()) {
    out << rep.to_csv();
    return kExitOk;
  }
  const std::filesystem::path dir(f.out);
  write_file(dir / "report.csv", rep.to_csv());
  write_file(dir / "report.json", rep.to_json());
  out << "wrote " << (dir / "report.csv").string() << " and " << (dir / "report.json").string();
  if (!rep.regions.empty()) {
    write_file(dir / "regions.csv", rep.regions_csv());
    out << " and " << (dir / "regions.csv").string();
  }
  out << "\n";
  for (const auto& n : rep.notes) out << "note: " << n << "\n";
  return kExitOk;
}

int cmd_sizer(const SizerFlags& f, std::ostream& out) {
  if (f.noise.empty()) {
    throw Error(ErrorKind::InvalidConfig,
                "SiZer uses a known error autocovariance; pass it as --noise (e.g. ar1:0.25)");
  }
  const NoiseSpec noise = NoiseSpec::parse(f.noise);
  std::vector<double> y;
  std::optional<long> start_year;
  if (!f.input.empty()) {
    InputDataset ds = read_dataset(f.input);
    y = std::move(ds.values);
    start_year = ds.start_year;
  } else {
    y = gen_series(f.T, TrendSpec::parse(f.trend), noise, f.seed, f.replicate).y;
  }
  const std::size_t T = y.size();
  ClusterRule rule = ClusterRule::Fixed;
  if (f.cluster == "bandwidth") {
    rule = ClusterRule::Bandwidth;
  } else if (f.cluster != "fixed") {
    throw Error(ErrorKind::InvalidConfig, "--cluster must be fixed or bandwidth, got '" + f.cluster + "'");
  }
  SizerConfig cfg{.gamma = noise.autocovariance(T),
                  .alpha = f.alpha,
                  .theta = f.theta,
                  .cluster_rule = rule,
                  .grid = load_grid(f.grid, T)};
  const SizerResult res = SizerPlan(cfg, default_kernel(), workers_or_default(f.workers)).evaluate(y);
  std::size_t flagged = 0;
  for (const auto& p : res.map.points) flagged += p.flag ? 1 : 0;
  char qbuf[32];
  std::snprintf(qbuf, sizeof qbuf, "%.6f", res.map.q);
  out << "T = " << T << ", noise " << noise.to_string() << ", " << res.map.points.size()
      << " points with ESS* >= 5 (" << res.map.dropped.size() << " dropped), g = " << res.map.g << "\n";
  if (rule == ClusterRule::Fixed) {
    out << "q = " << qbuf << " for every bandwidth\n";
  } else {
    out << "q depends on the bandwidth through the cluster index\n";
  }
  out << flagged << " significant slopes: " << (res.reject ? "reject" : "do not reject")
      << " the constant-trend hypothesis\n";
  for (const auto& r : res.minimal) {
    if (start_year) {
      if (const auto cal = map_interval_to_calendar(r.interval, *start_year, T)) {
        out << "  [" << cal->first << ", " << cal->last << "]\n";
      }
    } else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "  [%.4f, %.4f]\n", static_cast<double>(r.interval.lo) / T,
                    static_cast<double>(r.interval.hi) / T);
      out << buf;
    }
  }
  if (!f.out.empty()) write_file(std::filesystem::path(f.out) / "sizer_map.csv", sizer_map_csv(res.map));
  return kExitOk;
}

int cmd_summary(const std::string& path, std::ostream& out) {
  const ParsedOutcome parsed = outcome_from_json(read_file(path));
  out << format_summary(parsed.outcome, parsed.start_year);
  return kExitOk;
}

int cmd_generate(const GenerateFlags& f, std::ostream& out) {
  if (f.T < 1) throw Error(ErrorKind::InvalidConfig, "--T must be positive");
  const SimulatedSeries s =
      gen_series(f.T, TrendSpec::parse(f.trend), NoiseSpec::parse(f.noise), f.seed, f.replicate);
  std::ostringstream csv;
  csv << (f.start ? "year,value\n" : "value\n");
  char buf[40];
  for (std::size_t t = 0; t < s.y.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%.17g", s.y[t]);
    if (f.start) csv << (*f.start + static_cast<long>(t)) << ",";
    csv << buf << "\n";
  }
  if (f.out.empty() || f.out == "-") {
    out << csv.str();
  } else {
    write_file(f.out, csv.str());
  }
  return kExitOk;
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError:
      return kExitParse;
    case ErrorKind::SingularSystem:
    case ErrorKind::ExplosiveFit:
    case ErrorKind::SingularDesign:
    case ErrorKind::NonPositiveSigma:
    case ErrorKind::EmptyTable:
    case ErrorKind::DegenerateWindow:
      return kExitNumeric;
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidBandwidth:
    case ErrorKind::LengthMismatch:
    case ErrorKind::InsufficientData:
    case ErrorKind::NonStationarySpec:
      return kExitConfig;
  }
  return kExitConfig;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiscale tests for local increases and decreases of a time trend"};
  app.name("mstrend");
  app.require_subcommand(1);

  TestFlags test_flags;
  auto* test = app.add_subcommand("test", "Run the multiscale test on a series");
  test->add_option("input", test_flags.input, "CSV or whitespace-separated series")->required();
  test->add_option("--alpha", test_flags.alpha, "Significance level")->capture_default_str();
  test->add_option("--grid", test_flags.grid, "'default' or a file of (u, h) pairs")->capture_default_str();
  add_lrv_options(test, test_flags.lrv);
  test->add_option("--sims", test_flags.sims, "Gaussian simulations for the critical value")
      ->capture_default_str();
  test->add_option("--seed", test_flags.seed, "Seed for the critical-value simulation")->capture_default_str();
  test->add_option("--workers", test_flags.workers, "Worker threads (default: MSTREND_WORKERS or all cores)");
  test->add_option("--out", test_flags.out, "Directory for outcome.json and points.csv");

  TestFlags lrv_flags;
  auto* lrv = app.add_subcommand("lrv", "Estimate the long-run error variance");
  lrv->add_option("input", lrv_flags.input, "CSV or whitespace-separated series")->required();
  add_lrv_options(lrv, lrv_flags.lrv);
  lrv->add_option("--seed", lrv_flags.seed, "Accepted for uniformity; the estimators are deterministic");
  lrv->add_option("--out", lrv_flags.out, "Directory for lrv.json");

  SimulateFlags sim_flags;
  auto* sim = app.add_subcommand("simulate", "Run a simulation experiment from a spec file");
  sim->add_option("spec", sim_flags.spec, "Experiment spec file")->required();
  sim->add_option("--seed", sim_flags.seed, "Override the seed of the spec file");
  sim->add_option("--workers", sim_flags.workers, "Worker threads (default: MSTREND_WORKERS or all cores)");
  sim->add_option("--out", sim_flags.out, "Directory for report.csv, report.json and regions.csv");

  SizerFlags sizer_flags;
  auto* sizer = app.add_subcommand("sizer", "SiZer map under a known error autocovariance");
  sizer->add_option("input", sizer_flags.input, "Series file; omitted to simulate one from --noise/--trend");
  sizer->add_option("--noise", sizer_flags.noise, "Known error model, e.g. ar1:0.25 or ar2:0.167:0.178:0.322");
  sizer->add_option("--alpha", sizer_flags.alpha, "Significance level")->capture_default_str();
  sizer->add_option("--theta", sizer_flags.theta, "Cluster index")->capture_default_str();
  sizer->add_option("--cluster", sizer_flags.cluster, "Cluster index rule: fixed (uses --theta) or bandwidth")
      ->capture_default_str();
  sizer->add_option("--T", sizer_flags.T, "Length of a simulated series")->capture_default_str();
  sizer->add_option("--trend", sizer_flags.trend, "Trend of a simulated series")->capture_default_str();
  sizer->add_option("--seed", sizer_flags.seed, "Seed of a simulated series")->capture_default_str();
  sizer->add_option("--replicate", sizer_flags.replicate, "Replicate index of a simulated series")
      ->capture_default_str();
  sizer->add_option("--grid", sizer_flags.grid, "'default' or a file of (u, h) pairs")->capture_default_str();
  sizer->add_option("--workers", sizer_flags.workers, "Worker threads");
  sizer->add_option("--out", sizer_flags.out, "Directory for sizer_map.csv");

  std::string summary_path;
  auto* summary = app.add_subcommand("summary", "Print the summary stored in an outcome.json");
  summary->add_option("outcome", summary_path, "outcome.json written by 'mstrend test'")->required();

  GenerateFlags gen_flags;
  auto* gen = app.add_subcommand("generate", "Write a synthetic series");
  gen->add_option("--T", gen_flags.T, "Length")->capture_default_str();
  gen->add_option("--trend", gen_flags.trend, "Trend: constant:c, linear:b, centered_linear:b, broken_line:b, bump")
      ->capture_default_str();
  gen->add_option("--noise", gen_flags.noise, "Noise: white[:nu2], ar1:a[:nu2], ar2:a1:a2[:nu2]")
      ->capture_default_str();
  gen->add_option("--seed", gen_flags.seed, "Seed")->capture_default_str();
  gen->add_option("--replicate", gen_flags.replicate, "Replicate index")->capture_default_str();
  gen->add_option("--start", gen_flags.start, "First year label; adds a year column");
  gen->add_option("--out", gen_flags.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: UsageError: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (*test) return cmd_test(test_flags, out);
    if (*lrv) return cmd_lrv(lrv_flags, out);
    if (*sim) return cmd_simulate(sim_flags, out);
    if (*sizer) return cmd_sizer(sizer_flags, out);
    if (*summary) return cmd_summary(summary_path, out);
    if (*gen) return cmd_generate(gen_flags, out);
  } catch (const Error& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    err << "error: " << to_string(e.kind()) << ": " << msg << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: InternalError: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}

}  // namespace mstrend::cli
