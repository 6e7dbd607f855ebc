#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tiltmap {

enum class Errc {
  MalformedDocument,
  MissingProperty,
  DegenerateRing,
  AntipodalPoint,
  SelfIntersectingRing,
  ComponentTooSmall,
  UnknownArea,
  ConstantField,
  NegativeValue,
  OutOfRange,
  TooManyBars,
  InvalidState,
  ZeroVariance,
  NoNeighbors,
  TargetUnreachable,
  GenerationExhausted,
  NonPositiveMean,
  NotHeld,
  EmptyLog,
  PortInUse,
  IoError,
  InvalidArgument,
};

/// Machine-readable name, e.g. "MalformedDocument".
std::string_view errc_name(Errc code) noexcept;

/// All library failures are reported as tiltmap::Error carrying an Errc.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace tiltmap
