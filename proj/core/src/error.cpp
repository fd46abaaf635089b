#include "riemopt/error.hpp"

namespace riemopt {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ContractViolation: return "contract violation";
    case ErrorKind::SingularRetraction: return "singular retraction";
    case ErrorKind::AntipodalDomain: return "antipodal domain";
    case ErrorKind::UnsupportedArgument: return "unsupported argument";
    case ErrorKind::DegenerateTransport: return "degenerate transport";
    case ErrorKind::DegenerateStep: return "degenerate step";
    case ErrorKind::OutOfHypothesis: return "out of hypothesis";
    case ErrorKind::LineSearchFailure: return "line-search failure";
    case ErrorKind::EmptyTable: return "empty table";
    case ErrorKind::InvalidConfig: return "invalid config";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace riemopt
