#include "symcat/error.hpp"

namespace symcat {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedDocument: return "MalformedDocument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::UsageError: return "UsageError";
    case ErrorKind::NotComposable: return "NotComposable";
    case ErrorKind::NotInHyp: return "NotInHyp";
    case ErrorKind::NotIso: return "NotIso";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NonIntegralCount: return "NonIntegralCount";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::NonPermutationWithNonlinearity: return "NonPermutationWithNonlinearity";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorKind::AsymmetricDomain: return "AsymmetricDomain";
    case ErrorKind::ActionNotSimplicial: return "ActionNotSimplicial";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
  }
  return "Unknown";
}

}  // namespace symcat
