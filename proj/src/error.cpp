#include "simchar/error.hpp"

namespace simchar {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonOrientable: return "NonOrientable";
    case ErrorCode::kDegenerateSimplex: return "DegenerateSimplex";
    case ErrorCode::kBoundaryDetected: return "BoundaryDetected";
    case ErrorCode::kDegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::kPerturbationEscapedSimplex: return "PerturbationEscapedSimplex";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDegreeMismatch: return "DegreeMismatch";
    case ErrorCode::kNoParentLink: return "NoParentLink";
    case ErrorCode::kSingularGram: return "SingularGram";
    case ErrorCode::kNotACycle: return "NotACycle";
    case ErrorCode::kNotASpark: return "NotASpark";
    case ErrorCode::kExactnessViolation: return "ExactnessViolation";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kNonConvergent: return "NonConvergent";
    case ErrorCode::kUnsupportedAction: return "UnsupportedAction";
    case ErrorCode::kTruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kUnknownManifold: return "UnknownManifold";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace simchar
