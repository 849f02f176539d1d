#include "core/diag.hpp"

namespace fairflow {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::MissingReturn: return "MissingReturn";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::WidthOverflowRisk: return "WidthOverflowRisk";
    case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::ZeroMassGroup: return "ZeroMassGroup";
    case ErrorCode::ZeroMassCondition: return "ZeroMassCondition";
    case ErrorCode::NonBinaryOutcome: return "NonBinaryOutcome";
    case ErrorCode::NonUniformDistribution: return "NonUniformDistribution";
    case ErrorCode::IncompleteTable: return "IncompleteTable";
    case ErrorCode::ExposureMismatch: return "ExposureMismatch";
    case ErrorCode::ProtectedVariableClamped: return "ProtectedVariableClamped";
    case ErrorCode::SolverBudgetExceeded: return "SolverBudgetExceeded";
    case ErrorCode::BackendMismatch: return "BackendMismatch";
    case ErrorCode::DuplicateDefinition: return "DuplicateDefinition";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Internal: return "InternalError";
  }
  return "UnknownError";
}

std::string AnalysisError::render(const std::string& origin) const {
  std::string out;
  if (!origin.empty()) out += origin + ":";
  if (pos_.valid()) {
    out += std::to_string(pos_.line) + ":" + std::to_string(pos_.col) + ":";
  }
  if (!out.empty()) out += " ";
  out += error_code_name(code_);
  out += ": ";
  out += what();
  return out;
}

} // namespace fairflow
