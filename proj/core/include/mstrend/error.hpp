#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mstrend {

/// Failure classes raised by the library. The CLI maps each class onto an exit code.
enum class ErrorKind {
  DegenerateWindow,
  EmptyTable,
  InvalidBandwidth,
  LengthMismatch,
  NonPositiveSigma,
  InsufficientData,
  SingularSystem,
  ExplosiveFit,
  SingularDesign,
  NonStationarySpec,
  InvalidConfig,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mstrend
