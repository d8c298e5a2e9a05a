#pragma once

#include <stdexcept>
#include <string>

namespace nsinpaint {

enum class ErrorCode {
  EmptyMask,
  MaskTouchesBorder,
  ShapeMismatch,
  LengthMismatch,
  InvalidDomain,
  NotPositiveDefinite,
  SorDidNotConverge,
  NonFiniteEnergy,
  NonFiniteValues,
  StepUnderflow,
  ZeroEnergy,
  UnsupportedFormat,
  AllZeroImage,
  IoError,
  FactorTooSmall,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nsinpaint
