#include "clscad/error.hpp"

namespace clscad {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::WouldCreateCycle: return "WouldCreateCycle";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::UnknownAtom: return "UnknownAtom";
    case ErrorCode::InvalidPart: return "InvalidPart";
    case ErrorCode::UnknownPart: return "UnknownPart";
    case ErrorCode::NegativeCost: return "NegativeCost";
    case ErrorCode::DuplicateUuid: return "DuplicateUuid";
    case ErrorCode::UnknownAtomInRequest: return "UnknownAtomInRequest";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::IllTypedTerm: return "IllTypedTerm";
    case ErrorCode::NonUnitQuaternion: return "NonUnitQuaternion";
    case ErrorCode::AngleCountMismatch: return "AngleCountMismatch";
    case ErrorCode::InvalidProgram: return "InvalidProgram";
  }
  return "Unknown";
}

}  // namespace clscad
