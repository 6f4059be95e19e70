#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace varcomp {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  RankDeficientX,
  NonSymmetricKernel,
  IndefiniteKernel,
  TooFewObservations,
  EigenFailure,
  NumericalOverflow,
  SingularGram,
  SingularInformation,
  DegenerateFit,
  EmptyRegion,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Validation errors are problems with the inputs; everything else is a
// numerical failure. The CLI maps the two groups to distinct exit codes.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace varcomp
