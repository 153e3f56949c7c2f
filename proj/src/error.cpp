#include "sympmarg/error.hpp"

namespace sympmarg {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::NotPassive: return "NotPassive";
    case ErrorCode::NotPhysical: return "NotPhysical";
    case ErrorCode::NotPure: return "NotPure";
    case ErrorCode::SpectralPairingFailure: return "SpectralPairingFailure";
    case ErrorCode::DegenerateSubspaceFailure: return "DegenerateSubspaceFailure";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotSorted: return "NotSorted";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorCode::InfeasiblePair: return "InfeasiblePair";
    case ErrorCode::InfeasibleInput: return "InfeasibleInput";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::ToleranceCollapse: return "ToleranceCollapse";
    case ErrorCode::BelowOne: return "BelowOne";
    case ErrorCode::InversionFailure: return "InversionFailure";
    case ErrorCode::InvalidTrace: return "InvalidTrace";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace sympmarg
