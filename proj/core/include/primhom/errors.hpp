#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace primhom {

enum class ErrorCode {
  DivisionByZero,
  InvalidConfig,
  SpecMismatch,
  NotAUnit,
  NotInC,
  UnsupportedMonomialType,
  PropertyViolation,
  ObservationViolation,
  TooLarge,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// that callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace primhom
