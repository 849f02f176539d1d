#pragma once

#include <stdexcept>
#include <string>

namespace fairflow {

// Error taxonomy shared by the C++ core and the C API (codes must stay in
// sync with FF_ERR_* in include/fairflow/fairflow.h).
enum class ErrorCode : int {
  Ok = 0,
  Syntax = 1,
  UnboundVariable = 2,
  MissingReturn = 3,
  DomainMismatch = 4,
  WidthOverflowRisk = 5,
  SpaceTooLarge = 6,
  ZeroMassGroup = 7,
  ZeroMassCondition = 8,
  NonBinaryOutcome = 9,
  NonUniformDistribution = 10,
  IncompleteTable = 11,
  ExposureMismatch = 12,
  ProtectedVariableClamped = 13,
  SolverBudgetExceeded = 14,
  BackendMismatch = 15,
  DuplicateDefinition = 16,
  Config = 17,
  Io = 18,
  Internal = 19,
};

const char* error_code_name(ErrorCode code);

struct SourcePos {
  int line = 0; // 1-based; 0 means "no position"
  int col = 0;

  bool valid() const { return line > 0; }
};

class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(ErrorCode code, std::string message, SourcePos pos = {})
      : std::runtime_error(std::move(message)), code_(code), pos_(pos) {}

  ErrorCode code() const { return code_; }
  SourcePos pos() const { return pos_; }

  // "<origin>:line:col: <name>: <message>" (position parts only when known).
  std::string render(const std::string& origin = "") const;

 private:
  ErrorCode code_;
  SourcePos pos_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string message, SourcePos pos = {}) {
  throw AnalysisError(code, std::move(message), pos);
}

} // namespace fairflow
