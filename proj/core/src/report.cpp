#include "mstrend/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "mstrend/error.hpp"

namespace mstrend {
namespace {

using Json = nlohmann::ordered_json;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string g(double v) { return fmt("%.10g", v); }

Json fit_json(const ArFit& fit) {
  Json j;
  j["p"] = fit.p;
  j["a"] = fit.a;
  j["nu2"] = fit.nu2;
  j["sigma2"] = fit.sigma2;
  j["q"] = fit.q;
  j["r_bar"] = fit.r_bar;
  j["pilot"] = fit.pilot;
  j["nu2_pilot"] = fit.nu2_pilot;
  return j;
}

ArFit fit_from(const Json& j) {
  ArFit fit;
  fit.p = j.at("p").get<std::size_t>();
  fit.a = j.at("a").get<std::vector<double>>();
  fit.nu2 = j.at("nu2").get<double>();
  fit.sigma2 = j.at("sigma2").get<double>();
  fit.q = j.at("q").get<std::size_t>();
  fit.r_bar = j.at("r_bar").get<std::size_t>();
  fit.pilot = j.at("pilot").get<std::vector<double>>();
  fit.nu2_pilot = j.at("nu2_pilot").get<double>();
  return fit;
}

Json intervals_json(const std::vector<RejectedInterval>& list) {
  Json arr = Json::array();
  for (const auto& r : list) arr.push_back({r.index, r.statistic});
  return arr;
}

std::vector<RejectedInterval> intervals_from(const Json& arr, const TestOutcome& o) {
  std::vector<RejectedInterval> out;
  for (const auto& item : arr) {
    const auto index = item.at(0).get<std::size_t>();
    if (index >= o.points.size()) throw std::out_of_range("interval index out of range");
    out.push_back({index, o.points[index], Interval::of(o.points[index]), item.at(1).get<double>()});
  }
  return out;
}

std::string label(const Interval& iv, std::size_t T, std::optional<long> start_year) {
  if (start_year) {
    if (const auto cal = map_interval_to_calendar(iv, *start_year, T)) {
      return "[" + std::to_string(cal->first) + ", " + std::to_string(cal->last) + "]";
    }
    return "[outside the record]";
  }
  const double n = static_cast<double>(T);
  return "[" + fmt("%.4f", static_cast<double>(iv.lo) / n) + ", " +
         fmt("%.4f", static_cast<double>(iv.hi) / n) + "]";
}

}  // namespace

std::string outcome_to_json(const TestOutcome& o, std::optional<long> start_year) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["T"] = o.T;
  if (start_year) {
    j["start_year"] = *start_year;
  } else {
    j["start_year"] = nullptr;
  }
  j["alpha"] = o.alpha;
  j["statistic"] = o.statistic;
  j["critical_value"] = o.critical_value;
  j["reject"] = o.reject;
  j["sigma2"] = o.sigma2;
  j["lrv_method"] = o.lrv_method;
  j["ar_fit"] = o.ar_fit ? fit_json(*o.ar_fit) : Json(nullptr);
  j["selected_order"] = o.selected_order ? Json(*o.selected_order) : Json(nullptr);
  j["quantile"] = {{"n_sims", o.quantile_config.n_sims},
                   {"seed", o.quantile_config.seed},
                   {"alphas", o.quantile_config.alphas}};
  j["grid"] = {{"description", o.grid_description}, {"h_min", o.h_min}, {"h_max", o.h_max}};
  j["sign_threshold_positive"] = o.sign_threshold_positive;
  Json pts = Json::array();
  for (std::size_t i = 0; i < o.points.size(); ++i) {
    const auto& s = o.stats[i];
    pts.push_back({o.points[i].u_num, o.points[i].h_num, s.psi, s.corrected_abs, s.corrected_pos,
                   s.corrected_neg});
  }
  j["points"] = std::move(pts);
  Json dropped = Json::array();
  for (const auto& d : o.dropped) dropped.push_back({d.point.u_num, d.point.h_num, d.reason});
  j["dropped"] = std::move(dropped);
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string name(to_string(static_cast<SetKind>(k)));
    j["sets"][name] = intervals_json(o.sets[k].intervals);
    j["minimal"][name] = intervals_json(o.minimal[k]);
  }
  return j.dump(2) + "\n";
}

ParsedOutcome outcome_from_json(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion) {
      throw Error(ErrorKind::ParseError, "unsupported schema_version " + std::to_string(version));
    }
    ParsedOutcome parsed;
    TestOutcome& o = parsed.outcome;
    o.T = j.at("T").get<std::size_t>();
    if (!j.at("start_year").is_null()) parsed.start_year = j.at("start_year").get<long>();
    o.alpha = j.at("alpha").get<double>();
    o.statistic = j.at("statistic").get<double>();
    o.critical_value = j.at("critical_value").get<double>();
    o.reject = j.at("reject").get<bool>();
    o.sigma2 = j.at("sigma2").get<double>();
    o.lrv_method = j.at("lrv_method").get<std::string>();
    if (!j.at("ar_fit").is_null()) o.ar_fit = fit_from(j.at("ar_fit"));
    if (!j.at("selected_order").is_null()) o.selected_order = j.at("selected_order").get<std::size_t>();
    const Json& q = j.at("quantile");
    o.quantile_config.n_sims = q.at("n_sims").get<std::size_t>();
    o.quantile_config.seed = q.at("seed").get<std::uint64_t>();
    o.quantile_config.alphas = q.at("alphas").get<std::vector<double>>();
    const Json& grid = j.at("grid");
    o.grid_description = grid.at("description").get<std::string>();
    o.h_min = grid.at("h_min").get<double>();
    o.h_max = grid.at("h_max").get<double>();
    o.sign_threshold_positive = j.at("sign_threshold_positive").get<bool>();
    for (const auto& p : j.at("points")) {
      o.points.push_back({p.at(0).get<std::int64_t>(), p.at(1).get<std::int64_t>()});
      o.stats.push_back({p.at(2).get<double>(), p.at(3).get<double>(), p.at(4).get<double>(),
                         p.at(5).get<double>()});
    }
    for (const auto& d : j.at("dropped")) {
      o.dropped.push_back({{d.at(0).get<std::int64_t>(), d.at(1).get<std::int64_t>()},
                           d.at(2).get<std::string>()});
    }
    for (std::size_t k = 0; k < 3; ++k) {
      const auto kind = static_cast<SetKind>(k);
      const std::string name(to_string(kind));
      o.sets[k].kind = kind;
      o.sets[k].intervals = intervals_from(j.at("sets").at(name), o);
      o.minimal[k] = intervals_from(j.at("minimal").at(name), o);
    }
    return parsed;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed outcome JSON: ") + e.what());
  }
}

std::string outcome_points_csv(const TestOutcome& o) {
  std::vector<std::array<bool, 6>> member(o.points.size(), std::array<bool, 6>{});
  for (std::size_t k = 0; k < 3; ++k) {
    for (const auto& r : o.sets[k].intervals) member[r.index][k] = true;
    for (const auto& r : o.minimal[k]) member[r.index][3 + k] = true;
  }
  std::ostringstream out;
  out << "u,h,psi,stat_abs,stat_pos,stat_neg,in_pm,in_plus,in_minus,min_pm,min_plus,min_minus\n";
  const double n = static_cast<double>(o.T);
  for (std::size_t i = 0; i < o.points.size(); ++i) {
    const auto& s = o.stats[i];
    out << g(static_cast<double>(o.points[i].u_num) / n) << ","
        << g(static_cast<double>(o.points[i].h_num) / n) << "," << g(s.psi) << ","
        << g(s.corrected_abs) << "," << g(s.corrected_pos) << "," << g(s.corrected_neg);
    for (bool b : member[i]) out << "," << (b ? 1 : 0);
    out << "\n";
  }
  return out.str();
}

std::string format_summary(const TestOutcome& o, std::optional<long> start_year) {
  std::ostringstream out;
  out << "T = " << o.T << ", grid " << o.grid_description << " with " << o.points.size()
      << " points (h from " << fmt("%.4f", o.h_min) << " to " << fmt("%.4f", o.h_max) << ")";
  if (!o.dropped.empty()) out << ", " << o.dropped.size() << " dropped";
  out << "\n";
  out << "long-run variance: " << o.lrv_method << ", sigma2 = " << fmt("%.6f", o.sigma2) << "\n";
  if (o.ar_fit) {
    out << "AR(" << o.ar_fit->p << ") fit";
    if (o.selected_order) out << " (order chosen by BIC)";
    out << ": a =";
    for (double a : o.ar_fit->a) out << " " << fmt("%.6f", a);
    out << ", nu2 = " << fmt("%.6f", o.ar_fit->nu2) << "\n";
  }
  out << "critical values: " << o.quantile_config.n_sims << " Gaussian simulations, seed "
      << o.quantile_config.seed << "\n";
  out << "statistic = " << fmt("%.6f", o.statistic) << ", q(" << g(o.alpha)
      << ") = " << fmt("%.6f", o.critical_value) << ": "
      << (o.reject ? "reject" : "do not reject") << " the constant-trend hypothesis\n";
  if (!o.sign_threshold_positive) {
    out << "warning: q + lambda(h) <= 0 for some bandwidth; a point may enter both signed sets\n";
  }
  const char* names[3] = {"either direction", "increase", "decrease"};
  for (std::size_t k = 0; k < 3; ++k) {
    out << names[k] << ": " << o.sets[k].intervals.size() << " significant, "
        << o.minimal[k].size() << " minimal\n";
    for (const auto& r : o.minimal[k]) {
      out << "  " << label(r.interval, o.T, start_year) << "  stat = " << fmt("%.4f", r.statistic)
          << "\n";
    }
  }
  return out.str();
}

std::string ar_fit_to_json(const ArFit& fit) {
  Json j = fit_json(fit);
  j["schema_version"] = kSchemaVersion;
  return j.dump(2) + "\n";
}

std::string sizer_map_csv(const SizerMap& map) {
  std::ostringstream out;
  out << "u,h,estimate,sd,q,flag\n";
  const double n = static_cast<double>(map.T);
  for (const auto& p : map.points) {
    out << g(static_cast<double>(p.point.u_num) / n) << "," << g(static_cast<double>(p.point.h_num) / n)
        << "," << g(p.estimate) << "," << g(p.sd) << "," << g(p.q) << "," << (p.flag ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace mstrend
