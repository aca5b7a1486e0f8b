#include "ambiq/error.hpp"

namespace ambiq {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateCsMass: return "DegenerateCsMass";
    case ErrorCode::SingleCategoryUnsupported: return "SingleCategoryUnsupported";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::IndexError: return "IndexError";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InternalConsistency: return "InternalConsistency";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(message) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ambiq
