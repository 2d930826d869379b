#include "shapestat/error.hpp"

namespace shapestat {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::FocalMean: return "FocalMean";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::SingularLambda: return "SingularLambda";
    case ErrorCode::OutOfInjectivityRadius: return "OutOfInjectivityRadius";
    case ErrorCode::CutLocus: return "CutLocus";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateVariance:
    case ErrorCode::NumericalFailure:
    case ErrorCode::FocalMean:
    case ErrorCode::SingularCovariance:
    case ErrorCode::SingularLambda:
    case ErrorCode::OutOfInjectivityRadius:
    case ErrorCode::CutLocus:
    case ErrorCode::NoConvergence:
      return true;
    default:
      return false;
  }
}

}  // namespace shapestat
