#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncfield {

enum class ErrorCode {
  InvalidInput,
  NotMonic,
  NotCentred,
  RootFindingDiverged,
  DegenerateRoot,
  StepFailure,
  NotGeneric,
  InconsistentTrace,
  ImEtaZero,
  DegreeMismatch,
  SingularJacobian,
  SeedNotFound,
  HomotopyStalled,
  VerificationFailed,
  WrongConnectionCount,
  NotRealPositive,
  BoundaryApproachStalled,
  ResourceLimit,
  Io,
};

inline std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotMonic: return "NotMonic";
    case ErrorCode::NotCentred: return "NotCentred";
    case ErrorCode::RootFindingDiverged: return "RootFindingDiverged";
    case ErrorCode::DegenerateRoot: return "DegenerateRoot";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::NotGeneric: return "NotGeneric";
    case ErrorCode::InconsistentTrace: return "InconsistentTrace";
    case ErrorCode::ImEtaZero: return "ImEtaZero";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::SeedNotFound: return "SeedNotFound";
    case ErrorCode::HomotopyStalled: return "HomotopyStalled";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::WrongConnectionCount: return "WrongConnectionCount";
    case ErrorCode::NotRealPositive: return "NotRealPositive";
    case ErrorCode::BoundaryApproachStalled: return "BoundaryApproachStalled";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

// Input-side errors (bad data handed in) as opposed to numeric failures.
inline bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput:
    case ErrorCode::NotMonic:
    case ErrorCode::NotCentred:
    case ErrorCode::DegreeMismatch:
    case ErrorCode::Io:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ncfield
