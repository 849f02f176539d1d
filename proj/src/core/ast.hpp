#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "core/diag.hpp"
#include "core/domain.hpp"

namespace fairflow::dsl {

using fairflow::Domain;
using fairflow::SourcePos;

// Raw program text plus an origin label used in diagnostics ("<inline>" for
// programs constructed in memory).
struct SourceProgram {
  std::string text;
  std::string origin = "<inline>";
};

enum class BinOp { Add, Sub, Mul, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Neg, Not };

const char* bin_op_token(BinOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  struct IntLit {
    std::int64_t value;
  };
  struct VarRef {
    std::string name;
    int slot; // resolved by typecheck; -1 until then
  };
  struct Unary {
    UnOp op;
    ExprPtr operand;
  };
  struct Binary {
    BinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  // cond ? then : otherwise — both arms always well-defined (total language).
  struct Cond {
    ExprPtr cond;
    ExprPtr then_value;
    ExprPtr else_value;
  };

  std::variant<IntLit, VarRef, Unary, Binary, Cond> node;
  SourcePos pos;

  ExprPtr clone() const;
};

ExprPtr make_int(std::int64_t v, SourcePos pos = {});
ExprPtr make_var(std::string name, SourcePos pos = {});
ExprPtr make_unary(UnOp op, ExprPtr operand, SourcePos pos = {});
ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});
ExprPtr make_cond(ExprPtr cond, ExprPtr then_value, ExprPtr else_value, SourcePos pos = {});

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  struct Assign {
    std::string name;
    ExprPtr value;
    bool declares; // `let x = e;` vs `x = e;`
    int slot;      // resolved by typecheck; -1 until then
  };
  struct If {
    ExprPtr cond;
    std::vector<StmtPtr> then_body;
    std::vector<StmtPtr> else_body; // may be empty
  };
  struct Return {
    ExprPtr value;
  };

  std::variant<Assign, If, Return> node;
  SourcePos pos;

  StmtPtr clone() const;
};

std::vector<StmtPtr> clone_body(const std::vector<StmtPtr>& body);

struct Param {
  std::string name;
  Domain domain;
  SourcePos pos;
};

// Loop-free decision program P : product of param domains -> integers.
struct DecisionProgram {
  std::string name;
  std::vector<Param> params;
  std::vector<StmtPtr> body;

  DecisionProgram clone() const;
  int param_index(const std::string& name) const; // -1 if absent
};

// A concrete binding of every parameter to an in-domain value.
struct Assignment {
  std::vector<std::pair<std::string, std::int64_t>> values;

  static Assignment of(std::initializer_list<std::pair<std::string, std::int64_t>> init);
  const std::int64_t* find(const std::string& name) const;
};

// Substitutes named integer constants for free variable references; used to
// instantiate programs parameterized by config-level defines (e.g. a branch
// threshold swept by the CLI).
void substitute_defines(DecisionProgram& program, const std::map<std::string, std::int64_t>& defines);

std::string pretty_print(const DecisionProgram& program);
std::string pretty_print(const Expr& expr);

} // namespace fairflow::dsl
