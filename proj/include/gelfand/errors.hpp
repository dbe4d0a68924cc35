#pragma once

#include <stdexcept>
#include <string>

namespace gelfand {

enum class ErrorCode {
  InvalidArgument,
  DomainError,
  BlowUp,
  LostPositivity,
  ToleranceFailure,
  NoConvergence,
  StepCollapse,
  NoFold,
  BeyondFold,
  WrongProblem,
  NoRealRoots,
  SingularShift,
  NonpositiveFactor,
  IoError,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can report the module error name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace gelfand
