#pragma once

#include <stdexcept>
#include <string>

namespace fkstar {

enum class ErrorCode {
  kInvalidArgument,
  kParseError,
  kDisconnectedGraph,
  kBadOrigin,
  kDuplicateEdge,
  kUnknownVertex,
  kKindMismatch,
  kTimestampCollision,
  kNotFound,
  kQueryAtDeath,
  kPointOutsideRegion,
  kUnsupportedQ,
  kNonPositiveEstimate,
  kNoBracketing,
  kTooLarge,
  kDegenerateGroundState,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this one exception type; the
// code is what callers (CLI exit codes, Python bindings, tests) branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fkstar
