#include "fermi/errors.hpp"

namespace fermi {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonHermitian: return "NonHermitian";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::EmptyEigenspace: return "EmptyEigenspace";
    case Errc::InvalidState: return "InvalidState";
    case Errc::NotNormal: return "NotNormal";
    case Errc::NotEigenstate: return "NotEigenstate";
    case Errc::NotProjection: return "NotProjection";
    case Errc::NullWeight: return "NullWeight";
    case Errc::NonPositiveDelta: return "NonPositiveDelta";
    case Errc::InvalidMeasure: return "InvalidMeasure";
    case Errc::UnresolvedCriticalPoints: return "UnresolvedCriticalPoints";
    case Errc::CriticalValue: return "CriticalValue";
    case Errc::EmptyFiber: return "EmptyFiber";
    case Errc::RangeMismatch: return "RangeMismatch";
    case Errc::InvalidSymbol: return "InvalidSymbol";
    case Errc::EmptyFermiSurface: return "EmptyFermiSurface";
    case Errc::CriticalLevel: return "CriticalLevel";
    case Errc::GapViolation: return "GapViolation";
    case Errc::NormalizationFailure: return "NormalizationFailure";
    case Errc::ZeroLambda: return "ZeroLambda";
    case Errc::NonPositiveGamma: return "NonPositiveGamma";
    case Errc::LambdaOutOfBand: return "LambdaOutOfBand";
    case Errc::ExtremeLevel: return "ExtremeLevel";
  }
  return "Unknown";
}

}  // namespace fermi
