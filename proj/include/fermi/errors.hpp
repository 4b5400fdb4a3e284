#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fermi {

enum class Errc {
  InvalidArgument,
  DimensionMismatch,
  NonHermitian,
  ConvergenceFailure,
  EmptyEigenspace,
  InvalidState,
  NotNormal,
  NotEigenstate,
  NotProjection,
  NullWeight,
  NonPositiveDelta,
  InvalidMeasure,
  UnresolvedCriticalPoints,
  CriticalValue,
  EmptyFiber,
  RangeMismatch,
  InvalidSymbol,
  EmptyFermiSurface,
  CriticalLevel,
  GapViolation,
  NormalizationFailure,
  ZeroLambda,
  NonPositiveGamma,
  LambdaOutOfBand,
  ExtremeLevel,
};

std::string_view to_string(Errc code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace fermi
