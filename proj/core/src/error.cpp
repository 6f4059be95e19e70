#include "varcomp/error.hpp"

namespace varcomp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankDeficientX: return "RankDeficientX";
    case ErrorCode::NonSymmetricKernel: return "NonSymmetricKernel";
    case ErrorCode::IndefiniteKernel: return "IndefiniteKernel";
    case ErrorCode::TooFewObservations: return "TooFewObservations";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::NumericalOverflow: return "NumericalOverflow";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::SingularInformation: return "SingularInformation";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::RankDeficientX:
    case ErrorCode::NonSymmetricKernel:
    case ErrorCode::IndefiniteKernel:
    case ErrorCode::TooFewObservations:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace varcomp
