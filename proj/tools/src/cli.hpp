#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mstrend/error.hpp"

namespace mstrend::cli {

/// A time series read from a CSV or whitespace-separated text file.
struct InputDataset {
  std::vector<double> values;
  std::vector<long> labels;           ///< empty for single-column input
  std::optional<long> start_year;     ///< set when labels are consecutive integers
  std::string source;
  std::vector<std::string> diagnostics;
};

/// One value per row, or (label, value) pairs; comma or whitespace delimited, an
/// optional header row. Blank lines and lines starting with '#' are ignored.
/// Missing or non-numeric values raise ParseError naming the line; fewer than
/// 20 observations raise InsufficientData.
InputDataset parse_dataset(const std::string& text, const std::string& source = "<input>");
InputDataset read_dataset(const std::string& path);

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitConfig = 4;

int exit_code(ErrorKind kind) noexcept;

/// Runs the command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mstrend::cli
