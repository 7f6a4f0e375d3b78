#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace diaboli {

enum class ErrorKind {
  // instance
  MalformedHeader,
  ClauseArityError,
  DuplicateVariableInClause,
  VariableOutOfRange,
  ClauseCountMismatch,
  IndexOutOfRange,
  ProblemTooLarge,
  // hamiltonian
  UnknownVariant,
  EmptyMask,
  // eigensolver
  ConvergenceFailure,
  DimensionTooLarge,
  // holonomy
  DegenerateOnLoop,
  RefinementExhausted,
  OpenLoop,
  // perturbation
  DegenerateUnperturbed,
  // adiabatic
  NormDrift,
  ScheduleInvalid,
  // search
  OracleFailure,
  InternalContradiction,
  // generic argument validation
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for every module; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace diaboli
