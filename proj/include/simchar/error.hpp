#pragma once

#include <stdexcept>
#include <string>

namespace simchar {

enum class ErrorCode {
  kInvalidArgument = 1,
  kNonOrientable,
  kDegenerateSimplex,
  kBoundaryDetected,
  kDegreeOutOfRange,
  kPerturbationEscapedSimplex,
  kIndexOutOfRange,
  kDegreeMismatch,
  kNoParentLink,
  kSingularGram,
  kNotACycle,
  kNotASpark,
  kExactnessViolation,
  kNotPositiveDefinite,
  kNonConvergent,
  kUnsupportedAction,
  kTruncationInsufficient,
  kTooLarge,
  kUnknownManifold,
  kIoError,
  kParseError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace simchar
