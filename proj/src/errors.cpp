#include "gelfand/errors.hpp"

namespace gelfand {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::LostPositivity: return "LostPositivity";
    case ErrorCode::ToleranceFailure: return "ToleranceFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::StepCollapse: return "StepCollapse";
    case ErrorCode::NoFold: return "NoFold";
    case ErrorCode::BeyondFold: return "BeyondFold";
    case ErrorCode::WrongProblem: return "WrongProblem";
    case ErrorCode::NoRealRoots: return "NoRealRoots";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::NonpositiveFactor: return "NonpositiveFactor";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace gelfand
