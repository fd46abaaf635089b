#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace riemopt {

enum class ErrorKind {
  ContractViolation,    // precondition of an operation does not hold
  SingularRetraction,   // a column of x + eta has zero norm
  AntipodalDomain,      // inverse retraction outside its domain
  UnsupportedArgument,  // argument outside what an operation implements
  DegenerateTransport,  // transported vector has zero norm
  DegenerateStep,       // s = 0 or <z, z> = 0
  OutOfHypothesis,      // constants outside the sufficient-descent hypotheses
  LineSearchFailure,    // no Wolfe point within the evaluation budget
  EmptyTable,           // performance profile on no data
  InvalidConfig,        // malformed experiment configuration
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace riemopt
