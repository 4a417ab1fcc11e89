#include "cfw/error.hpp"

namespace cfw {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::InvalidQ: return "InvalidQ";
    case ErrorCode::EmptyActiveSet: return "EmptyActiveSet";
    case ErrorCode::SingletonActiveSet: return "SingletonActiveSet";
    case ErrorCode::WeightValidation: return "WeightValidation";
    case ErrorCode::InfeasibleStart: return "InfeasibleStart";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void throw_non_finite(std::string_view what) {
  throw Error(ErrorCode::NonFiniteInput, std::string(what) + " contains NaN or Inf");
}

}  // namespace cfw
