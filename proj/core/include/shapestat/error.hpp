#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shapestat {

enum class ErrorCode {
  InvalidArgument,
  DegenerateConfiguration,
  EmptySample,
  DegenerateVariance,
  NumericalFailure,
  FocalMean,
  SingularCovariance,
  SingularLambda,
  OutOfInjectivityRadius,
  CutLocus,
  NoConvergence,
  DomainError,
  ParseError,
  ShapeMismatch,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Numerical failures (focal mean, singular covariance, no convergence, ...)
// as opposed to bad input.
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shapestat
