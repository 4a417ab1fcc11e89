#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "cfw/types.hpp"

namespace cfw {

enum class ErrorCode {
  NonFiniteInput,
  DimensionMismatch,
  NotSymmetric,
  NotSquare,
  InvalidArgument,
  InvalidK,
  InvalidQ,
  EmptyActiveSet,
  SingletonActiveSet,
  WeightValidation,
  InfeasibleStart,
  ParseError,
  IoError,
  EmptyDataset,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the CLI) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_non_finite(std::string_view what);

template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& values, std::string_view what) {
  if (!values.allFinite()) throw_non_finite(what);
}

}  // namespace cfw
