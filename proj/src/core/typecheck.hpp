#pragma once

#include <optional>

#include "core/ast.hpp"

namespace fairflow::dsl {

// A typechecked, slot-resolved program. Immutable after construction; safe to
// share across threads. Guarantees:
//   - every execution path ends in a return statement
//   - every read is a parameter or a variable assigned on all paths before it
//   - all intermediate values provably fit in 32-bit two's complement for
//     every in-domain input (checked by interval analysis, never silently
//     wrapped)
//   - output_domain contains every reachable return value
class ValidatedProgram {
 public:
  const DecisionProgram& program() const { return program_; }
  const Domain& output_domain() const { return output_domain_; }
  // True when output_domain is the exact reachable set (not just a superset).
  bool output_domain_exact() const { return output_domain_exact_; }
  int slot_count() const { return slot_count_; }
  const std::vector<std::string>& slot_names() const { return slot_names_; }

  bool output_is_boolean() const;
  std::int64_t param_count() const { return static_cast<std::int64_t>(program_.params.size()); }

  ValidatedProgram() = default;
  ValidatedProgram(ValidatedProgram&&) = default;
  ValidatedProgram& operator=(ValidatedProgram&&) = default;
  ValidatedProgram clone() const; // deep copy (the AST is move-only)

 private:
  friend class ValidatedProgramInit; // typecheck-internal construction

  DecisionProgram program_;
  Domain output_domain_ = Domain::interval(0, 0);
  bool output_domain_exact_ = false;
  int slot_count_ = 0;
  std::vector<std::string> slot_names_;
};

// Typechecks against the program's own declared parameter domains.
// Throws AnalysisError with codes UnboundVariable, MissingReturn,
// DuplicateDefinition, WidthOverflowRisk, DomainMismatch.
ValidatedProgram typecheck(const DecisionProgram& program);

// Deterministic evaluation. `evaluate_ordered` takes arguments in parameter
// order and is the hot path for enumeration; `evaluate` validates an
// Assignment (names and domains) first.
std::int64_t evaluate_ordered(const ValidatedProgram& vp, const std::int64_t* args);
std::int64_t evaluate(const ValidatedProgram& vp, const Assignment& a);

} // namespace fairflow::dsl
