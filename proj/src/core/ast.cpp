#include "core/ast.hpp"

#include <sstream>

namespace fairflow::dsl {

const char* bin_op_token(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

ExprPtr make_int(std::int64_t v, SourcePos pos) {
  auto e = std::make_unique<Expr>();
  e->node = Expr::IntLit{v};
  e->pos = pos;
  return e;
}

ExprPtr make_var(std::string name, SourcePos pos) {
  auto e = std::make_unique<Expr>();
  e->node = Expr::VarRef{std::move(name), -1};
  e->pos = pos;
  return e;
}

ExprPtr make_unary(UnOp op, ExprPtr operand, SourcePos pos) {
  auto e = std::make_unique<Expr>();
  e->node = Expr::Unary{op, std::move(operand)};
  e->pos = pos;
  return e;
}

ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  auto e = std::make_unique<Expr>();
  e->node = Expr::Binary{op, std::move(lhs), std::move(rhs)};
  e->pos = pos;
  return e;
}

ExprPtr make_cond(ExprPtr cond, ExprPtr then_value, ExprPtr else_value, SourcePos pos) {
  auto e = std::make_unique<Expr>();
  e->node = Expr::Cond{std::move(cond), std::move(then_value), std::move(else_value)};
  e->pos = pos;
  return e;
}

ExprPtr Expr::clone() const {
  auto out = std::make_unique<Expr>();
  out->pos = pos;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          out->node = n;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          out->node = n;
        } else if constexpr (std::is_same_v<T, Unary>) {
          out->node = Unary{n.op, n.operand->clone()};
        } else if constexpr (std::is_same_v<T, Binary>) {
          out->node = Binary{n.op, n.lhs->clone(), n.rhs->clone()};
        } else {
          out->node = Cond{n.cond->clone(), n.then_value->clone(), n.else_value->clone()};
        }
      },
      node);
  return out;
}

StmtPtr Stmt::clone() const {
  auto out = std::make_unique<Stmt>();
  out->pos = pos;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Assign>) {
          out->node = Assign{n.name, n.value->clone(), n.declares, n.slot};
        } else if constexpr (std::is_same_v<T, If>) {
          out->node = If{n.cond->clone(), clone_body(n.then_body), clone_body(n.else_body)};
        } else {
          out->node = Return{n.value->clone()};
        }
      },
      node);
  return out;
}

std::vector<StmtPtr> clone_body(const std::vector<StmtPtr>& body) {
  std::vector<StmtPtr> out;
  out.reserve(body.size());
  for (const auto& s : body) out.push_back(s->clone());
  return out;
}

DecisionProgram DecisionProgram::clone() const {
  DecisionProgram out;
  out.name = name;
  out.params = params;
  out.body = clone_body(body);
  return out;
}

int DecisionProgram::param_index(const std::string& param_name) const {
  for (size_t i = 0; i < params.size(); ++i) {
    if (params[i].name == param_name) return static_cast<int>(i);
  }
  return -1;
}

Assignment Assignment::of(std::initializer_list<std::pair<std::string, std::int64_t>> init) {
  Assignment a;
  a.values.assign(init.begin(), init.end());
  return a;
}

const std::int64_t* Assignment::find(const std::string& name) const {
  for (const auto& [n, v] : values) {
    if (n == name) return &v;
  }
  return nullptr;
}

namespace {

void substitute_expr(ExprPtr& expr, const std::map<std::string, std::int64_t>& defines) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::VarRef>) {
          auto it = defines.find(n.name);
          if (it != defines.end()) {
            expr->node = Expr::IntLit{it->second};
          }
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          substitute_expr(n.operand, defines);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          substitute_expr(n.lhs, defines);
          substitute_expr(n.rhs, defines);
        } else if constexpr (std::is_same_v<T, Expr::Cond>) {
          substitute_expr(n.cond, defines);
          substitute_expr(n.then_value, defines);
          substitute_expr(n.else_value, defines);
        }
      },
      expr->node);
}

void substitute_body(std::vector<StmtPtr>& body, const std::map<std::string, std::int64_t>& defines);

void substitute_stmt(StmtPtr& stmt, const std::map<std::string, std::int64_t>& defines) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          substitute_expr(n.value, defines);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          substitute_expr(n.cond, defines);
          substitute_body(n.then_body, defines);
          substitute_body(n.else_body, defines);
        } else {
          substitute_expr(n.value, defines);
        }
      },
      stmt->node);
}

void substitute_body(std::vector<StmtPtr>& body, const std::map<std::string, std::int64_t>& defines) {
  for (auto& s : body) substitute_stmt(s, defines);
}

// Precedence levels for parenthesis-minimal printing; must mirror the parser.
int precedence(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 3;
    case BinOp::Add:
    case BinOp::Sub: return 4;
    case BinOp::Mul: return 5;
  }
  return 0;
}

void print_expr(std::ostream& os, const Expr& expr, int parent_prec);

void print_operand(std::ostream& os, const Expr& expr, int prec) {
  print_expr(os, expr, prec);
}

void print_expr(std::ostream& os, const Expr& expr, int parent_prec) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          os << n.value;
        } else if constexpr (std::is_same_v<T, Expr::VarRef>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          os << (n.op == UnOp::Neg ? "-" : "!");
          // unary binds tighter than any binary op
          bool paren = !std::holds_alternative<Expr::IntLit>(n.operand->node) &&
                       !std::holds_alternative<Expr::VarRef>(n.operand->node) &&
                       !std::holds_alternative<Expr::Unary>(n.operand->node);
          if (paren) os << "(";
          print_expr(os, *n.operand, 6);
          if (paren) os << ")";
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          int prec = precedence(n.op);
          bool paren = prec < parent_prec;
          if (paren) os << "(";
          // comparisons are non-associative, so both operands bind tighter
          bool is_cmp = prec == 3;
          print_operand(os, *n.lhs, is_cmp ? prec + 1 : prec);
          os << " " << bin_op_token(n.op) << " ";
          print_operand(os, *n.rhs, prec + 1);
          if (paren) os << ")";
        } else {
          bool paren = parent_prec > 0;
          if (paren) os << "(";
          print_expr(os, *n.cond, 1);
          os << " ? ";
          print_expr(os, *n.then_value, 0);
          os << " : ";
          print_expr(os, *n.else_value, 0);
          if (paren) os << ")";
        }
      },
      expr.node);
}

void print_body(std::ostream& os, const std::vector<StmtPtr>& body, int indent) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  for (const auto& stmt : body) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Stmt::Assign>) {
            os << pad << (n.declares ? "let " : "") << n.name << " = ";
            print_expr(os, *n.value, 0);
            os << ";\n";
          } else if constexpr (std::is_same_v<T, Stmt::If>) {
            os << pad << "if (";
            print_expr(os, *n.cond, 0);
            os << ") {\n";
            print_body(os, n.then_body, indent + 1);
            if (!n.else_body.empty()) {
              os << pad << "} else {\n";
              print_body(os, n.else_body, indent + 1);
            }
            os << pad << "}\n";
          } else {
            os << pad << "return ";
            print_expr(os, *n.value, 0);
            os << ";\n";
          }
        },
        stmt->node);
  }
}

} // namespace

void substitute_defines(DecisionProgram& program, const std::map<std::string, std::int64_t>& defines) {
  if (defines.empty()) return;
  substitute_body(program.body, defines);
}

std::string pretty_print(const DecisionProgram& program) {
  std::ostringstream os;
  os << "program " << program.name << "(";
  for (size_t i = 0; i < program.params.size(); ++i) {
    if (i) os << ", ";
    os << program.params[i].name << " : " << program.params[i].domain.to_string();
  }
  os << ") {\n";
  print_body(os, program.body, 1);
  os << "}\n";
  return os.str();
}

std::string pretty_print(const Expr& expr) {
  std::ostringstream os;
  print_expr(os, expr, 0);
  return os.str();
}

} // namespace fairflow::dsl
