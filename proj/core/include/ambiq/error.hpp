#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ambiq {

enum class ErrorCode {
  InvalidArgument,
  DegenerateCsMass,
  SingleCategoryUnsupported,
  DomainError,
  IndexError,
  NonFiniteIntegrand,
  SingularPoint,
  ShapeMismatch,
  TooFewSamples,
  EmptySample,
  TooLarge,
  UnknownLabel,
  MalformedRow,
  EmptyFile,
  MissingField,
  IoError,
  InternalConsistency,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace ambiq
