#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clscad {

enum class ErrorCode {
  DuplicateName,
  UnknownParent,
  WouldCreateCycle,
  UnknownNode,
  SchemaViolation,
  UnknownAtom,
  InvalidPart,
  UnknownPart,
  NegativeCost,
  DuplicateUuid,
  UnknownAtomInRequest,
  InvalidRequest,
  IllTypedTerm,
  NonUnitQuaternion,
  AngleCountMismatch,
  InvalidProgram,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI and the HTTP layer can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clscad
