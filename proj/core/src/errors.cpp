#include "primhom/errors.hpp"

namespace primhom {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::NotInC: return "NotInC";
    case ErrorCode::UnsupportedMonomialType: return "UnsupportedMonomialType";
    case ErrorCode::PropertyViolation: return "PropertyViolation";
    case ErrorCode::ObservationViolation: return "ObservationViolation";
    case ErrorCode::TooLarge: return "TooLarge";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace primhom
