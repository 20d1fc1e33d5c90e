#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace laoa {

enum class ErrorCode {
  InvalidArgument,
  OutOfRange,
  DegenerateElevation,
  InsufficientSnapshots,
  TooFewSnapshots,
  InsufficientSeparation,
  RankOutOfRange,
  ConvergenceFailure,
  DegreeZero,
  NotEnoughRoots,
  QTooLarge,
  PermutationBudget,
  ParseError,
  DimensionMismatch,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// All library failures are reported through this type; code() carries the
/// machine-readable category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace laoa
