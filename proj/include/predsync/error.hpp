#pragma once

#include <stdexcept>
#include <string>

namespace predsync {

enum class ErrorCode {
  InvalidArgument,
  CapExceeded,
  DuplicateId,
  SelfLoop,
  IdOutOfRange,
  MalformedLine,
  NonTermination,
  ProtocolViolation,
  EmptyPalette,
  InconsistentPrediction,
  IncompatiblePattern,
  RoundOutOfRange,
  Config,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace predsync
