#include "laoa/error.hpp"

namespace laoa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateElevation: return "DegenerateElevation";
    case ErrorCode::InsufficientSnapshots: return "InsufficientSnapshots";
    case ErrorCode::TooFewSnapshots: return "TooFewSnapshots";
    case ErrorCode::InsufficientSeparation: return "InsufficientSeparation";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::NotEnoughRoots: return "NotEnoughRoots";
    case ErrorCode::QTooLarge: return "QTooLarge";
    case ErrorCode::PermutationBudget: return "PermutationBudget";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace laoa
