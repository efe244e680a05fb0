#include "fkstar/error.hpp"

namespace fkstar {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kBadOrigin: return "BadOrigin";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kUnknownVertex: return "UnknownVertex";
    case ErrorCode::kKindMismatch: return "KindMismatch";
    case ErrorCode::kTimestampCollision: return "TimestampCollision";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kQueryAtDeath: return "QueryAtDeath";
    case ErrorCode::kPointOutsideRegion: return "PointOutsideRegion";
    case ErrorCode::kUnsupportedQ: return "UnsupportedQ";
    case ErrorCode::kNonPositiveEstimate: return "NonPositiveEstimate";
    case ErrorCode::kNoBracketing: return "NoBracketing";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kDegenerateGroundState: return "DegenerateGroundState";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace fkstar
