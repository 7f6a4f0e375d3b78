#include "diaboli/error.hpp"

namespace diaboli {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedHeader: return "MalformedHeader";
    case ErrorKind::ClauseArityError: return "ClauseArityError";
    case ErrorKind::DuplicateVariableInClause: return "DuplicateVariableInClause";
    case ErrorKind::VariableOutOfRange: return "VariableOutOfRange";
    case ErrorKind::ClauseCountMismatch: return "ClauseCountMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ProblemTooLarge: return "ProblemTooLarge";
    case ErrorKind::UnknownVariant: return "UnknownVariant";
    case ErrorKind::EmptyMask: return "EmptyMask";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::DegenerateOnLoop: return "DegenerateOnLoop";
    case ErrorKind::RefinementExhausted: return "RefinementExhausted";
    case ErrorKind::OpenLoop: return "OpenLoop";
    case ErrorKind::DegenerateUnperturbed: return "DegenerateUnperturbed";
    case ErrorKind::NormDrift: return "NormDrift";
    case ErrorKind::ScheduleInvalid: return "ScheduleInvalid";
    case ErrorKind::OracleFailure: return "OracleFailure";
    case ErrorKind::InternalContradiction: return "InternalContradiction";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace diaboli
