#include "mstrend/error.hpp"

namespace mstrend {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateWindow: return "DegenerateWindow";
    case ErrorKind::EmptyTable: return "EmptyTable";
    case ErrorKind::InvalidBandwidth: return "InvalidBandwidth";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::ExplosiveFit: return "ExplosiveFit";
    case ErrorKind::SingularDesign: return "SingularDesign";
    case ErrorKind::NonStationarySpec: return "NonStationarySpec";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

}  // namespace mstrend
