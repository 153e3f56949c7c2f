#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sympmarg {

enum class ErrorCode {
  InvalidArgument,
  NotSymmetric,
  NotPositive,
  NotSymplectic,
  NotPassive,
  NotPhysical,
  NotPure,
  SpectralPairingFailure,
  DegenerateSubspaceFailure,
  LengthMismatch,
  NotSorted,
  NonPositive,
  NegativeEntry,
  NonPositiveTemperature,
  InfeasiblePair,
  InfeasibleInput,
  NumericalFailure,
  ToleranceCollapse,
  BelowOne,
  InversionFailure,
  InvalidTrace,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sympmarg
