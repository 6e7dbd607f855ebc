#include "tiltmap/error.hpp"

namespace tiltmap {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::MissingProperty: return "MissingProperty";
    case Errc::DegenerateRing: return "DegenerateRing";
    case Errc::AntipodalPoint: return "AntipodalPoint";
    case Errc::SelfIntersectingRing: return "SelfIntersectingRing";
    case Errc::ComponentTooSmall: return "ComponentTooSmall";
    case Errc::UnknownArea: return "UnknownArea";
    case Errc::ConstantField: return "ConstantField";
    case Errc::NegativeValue: return "NegativeValue";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::TooManyBars: return "TooManyBars";
    case Errc::InvalidState: return "InvalidState";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::NoNeighbors: return "NoNeighbors";
    case Errc::TargetUnreachable: return "TargetUnreachable";
    case Errc::GenerationExhausted: return "GenerationExhausted";
    case Errc::NonPositiveMean: return "NonPositiveMean";
    case Errc::NotHeld: return "NotHeld";
    case Errc::EmptyLog: return "EmptyLog";
    case Errc::PortInUse: return "PortInUse";
    case Errc::IoError: return "IoError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

}  // namespace tiltmap
