#include "mstrend/simulate.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mstrend/error.hpp"

namespace mstrend {
namespace {

std::vector<std::string> split_colon(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ':')) parts.push_back(cur);
  if (!text.empty() && text.back() == ':') parts.emplace_back();
  return parts;
}

double parse_number(const std::string& field, const std::string& context) {
  double v = 0.0;
  const char* b = field.data();
  const char* e = b + field.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (field.empty() || ec != std::errc() || ptr != e || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidConfig, "bad number '" + field + "' in '" + context + "'");
  }
  return v;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

double TrendSpec::operator()(double u) const noexcept {
  switch (kind) {
    case Kind::Constant:
      return param;
    case Kind::Linear:
      return param * u;
    case Kind::CenteredLinear:
      return param * (u - 0.5);
    case Kind::BrokenLine:
      return u >= 0.5 ? param * (u - 0.5) : 0.0;
    case Kind::Bump: {
      if (u < 0.4 || u > 0.6) return 0.0;
      const double s = 1.0 - 100.0 * (u - 0.5) * (u - 0.5);
      return 2.0 * s * s;
    }
  }
  return 0.0;
}

TrendSpec TrendSpec::parse(const std::string& text) {
  const auto parts = split_colon(text);
  if (parts.empty()) throw Error(ErrorKind::InvalidConfig, "empty trend specification");
  const std::string& name = parts[0];
  TrendSpec spec;
  if (name == "bump") {
    if (parts.size() != 1) throw Error(ErrorKind::InvalidConfig, "'bump' takes no parameter");
    spec.kind = Kind::Bump;
    return spec;
  }
  if (name == "constant") {
    spec.kind = Kind::Constant;
  } else if (name == "linear") {
    spec.kind = Kind::Linear;
  } else if (name == "centered_linear") {
    spec.kind = Kind::CenteredLinear;
  } else if (name == "broken_line") {
    spec.kind = Kind::BrokenLine;
  } else {
    throw Error(ErrorKind::InvalidConfig, "unknown trend '" + name + "' in '" + text + "'");
  }
  if (parts.size() == 1 && spec.kind == Kind::Constant) return spec;
  if (parts.size() != 2) {
    throw Error(ErrorKind::InvalidConfig, "trend '" + text + "' needs exactly one parameter");
  }
  spec.param = parse_number(parts[1], text);
  return spec;
}

std::string TrendSpec::to_string() const {
  switch (kind) {
    case Kind::Constant:
      return "constant:" + format_number(param);
    case Kind::Linear:
      return "linear:" + format_number(param);
    case Kind::CenteredLinear:
      return "centered_linear:" + format_number(param);
    case Kind::BrokenLine:
      return "broken_line:" + format_number(param);
    case Kind::Bump:
      return "bump";
  }
  return "unknown";
}

void NoiseSpec::validate() const {
  if (!(nu2 >= 0.0) || !std::isfinite(nu2)) {
    throw Error(ErrorKind::InvalidConfig, "innovation variance must be >= 0, got " + format_number(nu2));
  }
  for (double v : a) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonStationarySpec, "AR coefficient is not finite");
  }
  if (a.size() == 1 && !(std::abs(a[0]) < 1.0)) {
    throw Error(ErrorKind::NonStationarySpec, "AR(1) coefficient " + format_number(a[0]) +
                                                  " is not inside (-1, 1)");
  }
  if (a.size() == 2) {
    const double a1 = a[0], a2 = a[1];
    if (!(std::abs(a2) < 1.0 && a1 + a2 < 1.0 && a2 - a1 < 1.0)) {
      throw Error(ErrorKind::NonStationarySpec, "AR(2) coefficients (" + format_number(a1) + ", " +
                                                    format_number(a2) +
                                                    ") lie outside the stationarity triangle");
    }
  }
  if (a.size() > 2) {
    throw Error(ErrorKind::NonStationarySpec, "only AR orders 0, 1 and 2 are supported");
  }
}

double NoiseSpec::variance() const {
  validate();
  return autocovariance(1)[0];
}

double NoiseSpec::long_run_variance() const {
  validate();
  double s = 0.0;
  for (double v : a) s += v;
  return nu2 / ((1.0 - s) * (1.0 - s));
}

std::vector<double> NoiseSpec::autocovariance(std::size_t n) const {
  validate();
  std::vector<double> g(n, 0.0);
  if (n == 0) return g;
  if (a.empty()) {
    g[0] = nu2;
  } else if (a.size() == 1) {
    g[0] = nu2 / (1.0 - a[0] * a[0]);
    for (std::size_t k = 1; k < n; ++k) g[k] = a[0] * g[k - 1];
  } else {
    const double a1 = a[0], a2 = a[1];
    g[0] = nu2 * (1.0 - a2) / ((1.0 + a2) * ((1.0 - a2) * (1.0 - a2) - a1 * a1));
    if (n > 1) g[1] = a1 * g[0] / (1.0 - a2);
    for (std::size_t k = 2; k < n; ++k) g[k] = a1 * g[k - 1] + a2 * g[k - 2];
  }
  return g;
}

NoiseSpec NoiseSpec::parse(const std::string& text) {
  const auto parts = split_colon(text);
  if (parts.empty()) throw Error(ErrorKind::InvalidConfig, "empty noise specification");
  NoiseSpec spec;
  std::size_t order = 0;
  if (parts[0] == "white") {
    order = 0;
  } else if (parts[0] == "ar1") {
    order = 1;
  } else if (parts[0] == "ar2") {
    order = 2;
  } else {
    throw Error(ErrorKind::InvalidConfig, "unknown noise '" + parts[0] + "' in '" + text + "'");
  }
  if (parts.size() != order + 1 && parts.size() != order + 2) {
    throw Error(ErrorKind::InvalidConfig, "noise '" + text + "' needs " + std::to_string(order) +
                                              " coefficient(s) and an optional variance");
  }
  for (std::size_t j = 0; j < order; ++j) spec.a.push_back(parse_number(parts[j + 1], text));
  if (parts.size() == order + 2) spec.nu2 = parse_number(parts[order + 1], text);
  spec.validate();
  return spec;
}

std::string NoiseSpec::to_string() const {
  std::string out = a.empty() ? "white" : "ar" + std::to_string(a.size());
  for (double v : a) out += ":" + format_number(v);
  return out + ":" + format_number(nu2);
}

std::vector<double> gen_noise(std::size_t T, const NoiseSpec& noise, NormalStream& stream) {
  noise.validate();
  const double nu = std::sqrt(noise.nu2);
  std::vector<double> e(T);
  if (T == 0) return e;
  if (noise.a.empty()) {
    for (double& v : e) v = nu * stream.next();
  } else if (noise.a.size() == 1) {
    const double a = noise.a[0];
    e[0] = std::sqrt(noise.nu2 / (1.0 - a * a)) * stream.next();
    for (std::size_t t = 1; t < T; ++t) e[t] = a * e[t - 1] + nu * stream.next();
  } else {
    const double a1 = noise.a[0], a2 = noise.a[1];
    double x1 = 0.0, x2 = 0.0;
    for (std::size_t s = 0; s < kAr2BurnIn + T; ++s) {
      const double x = a1 * x1 + a2 * x2 + nu * stream.next();
      x2 = x1;
      x1 = x;
      if (s >= kAr2BurnIn) e[s - kAr2BurnIn] = x;
    }
  }
  return e;
}

SimulatedSeries gen_series(std::size_t T, const TrendSpec& trend, const NoiseSpec& noise,
                           std::uint64_t seed, std::uint64_t replicate) {
  NormalStream stream(seed, stream_id(StreamTag::Noise, replicate));
  SimulatedSeries s;
  s.errors = gen_noise(T, noise, stream);
  s.y.resize(T);
  const double n = static_cast<double>(T);
  for (std::size_t t = 0; t < T; ++t) s.y[t] = trend(static_cast<double>(t + 1) / n) + s.errors[t];
  return s;
}

}  // namespace mstrend
