#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace mstrend::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  if (line.find(',') != std::string::npos) {
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
  } else {
    std::istringstream in(line);
    std::string field;
    while (in >> field) out.push_back(field);
  }
  return out;
}

std::optional<double> to_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<long> to_integer(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::ParseError, source + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

InputDataset parse_dataset(const std::string& text, const std::string& source) {
  InputDataset ds;
  ds.source = source;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  std::size_t columns = 0;
  bool first_row = true;
  std::vector<std::string> label_text;
  while (std::getline(in, raw)) {
    ++lineno;
    if (lineno == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0) raw.erase(0, 3);
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line);
    if (first_row) {
      first_row = false;
      bool numeric = !fields.empty();
      for (const auto& f : fields) numeric = numeric && to_number(f).has_value();
      if (!numeric && fields.size() >= 1 && fields.size() <= 2) {
        // A header names the columns; it must not look like a broken data row.
        ds.diagnostics.push_back("line " + std::to_string(lineno) + " read as a header");
        columns = fields.size();
        continue;
      }
    }
    if (columns == 0) columns = fields.size();
    if (columns < 1 || columns > 2) {
      fail(source, lineno, "expected one or two columns, found " + std::to_string(fields.size()));
    }
    if (fields.size() != columns) {
      if (fields.size() + 1 == columns) fail(source, lineno, "missing value");
      fail(source, lineno, "expected " + std::to_string(columns) + " column(s), found " +
                               std::to_string(fields.size()));
    }
    const std::string& value = fields.back();
    const auto v = to_number(value);
    if (!v) fail(source, lineno, "missing or non-numeric value '" + value + "'");
    ds.values.push_back(*v);
    if (columns == 2) label_text.push_back(fields.front());
  }
  if (ds.values.size() < 20) {
    throw Error(ErrorKind::InsufficientData, source + ": " + std::to_string(ds.values.size()) +
                                                 " observations; at least 20 are required");
  }
  if (columns == 2) {
    bool consecutive = true;
    for (std::size_t i = 0; i < label_text.size(); ++i) {
      const auto l = to_integer(label_text[i]);
      if (!l) {
        consecutive = false;
        ds.labels.clear();
        break;
      }
      if (i > 0 && *l != ds.labels.back() + 1) consecutive = false;
      ds.labels.push_back(*l);
    }
    if (consecutive) {
      ds.start_year = ds.labels.front();
    } else {
      ds.diagnostics.push_back("labels are not consecutive integers; intervals are reported in rescaled time");
    }
  }
  return ds;
}

InputDataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), path);
}

}  // namespace mstrend::cli
