#include "icp/error.hpp"

namespace icp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::EdgeUsedOnceOrThrice: return "EdgeUsedOnceOrThrice";
    case ErrorCode::BrokenFaceWalk: return "BrokenFaceWalk";
    case ErrorCode::DisconnectedComplex: return "DisconnectedComplex";
    case ErrorCode::NonOrientable: return "NonOrientable";
    case ErrorCode::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorCode::StarConditionViolated: return "StarConditionViolated";
    case ErrorCode::GeometryMismatch: return "GeometryMismatch";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NonConvergence: return "NonConvergence";
  }
  return "Unknown";
}

}  // namespace icp
