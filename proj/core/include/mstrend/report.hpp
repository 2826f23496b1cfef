#pragma once

#include <optional>
#include <string>

#include "mstrend/inference.hpp"
#include "mstrend/lrv.hpp"
#include "mstrend/sizer.hpp"

namespace mstrend {

/// Version of the JSON documents written by the library.
inline constexpr int kSchemaVersion = 1;

std::string outcome_to_json(const TestOutcome& outcome, std::optional<long> start_year = {});

struct ParsedOutcome {
  TestOutcome outcome;
  std::optional<long> start_year;
};

/// Inverse of outcome_to_json. Throws ParseError on malformed documents or an
/// unknown schema version.
ParsedOutcome outcome_from_json(const std::string& text);

/// u, h, psi, corrected statistics and set / minimal membership for every point.
std::string outcome_points_csv(const TestOutcome& outcome);

/// Human-readable summary printed by the CLI.
std::string format_summary(const TestOutcome& outcome, std::optional<long> start_year = {});

std::string ar_fit_to_json(const ArFit& fit);

/// u, h, estimate, sd, q, flag for every evaluated point.
std::string sizer_map_csv(const SizerMap& map);

}  // namespace mstrend
