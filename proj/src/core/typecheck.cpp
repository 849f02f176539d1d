#include "core/typecheck.hpp"

#include <algorithm>
#include <set>

namespace fairflow::dsl {

// Typecheck-internal access to ValidatedProgram's fields.
class ValidatedProgramInit {
 public:
  static DecisionProgram& program(ValidatedProgram& vp) { return vp.program_; }
  static Domain& output_domain(ValidatedProgram& vp) { return vp.output_domain_; }
  static bool& output_domain_exact(ValidatedProgram& vp) { return vp.output_domain_exact_; }
  static int& slot_count(ValidatedProgram& vp) { return vp.slot_count_; }
  static std::vector<std::string>& slot_names(ValidatedProgram& vp) { return vp.slot_names_; }
};

namespace {

constexpr std::int64_t kInt32Min = -2147483648LL;
constexpr std::int64_t kInt32Max = 2147483647LL;
constexpr size_t kValueSetCap = 1024;
constexpr size_t kPairWorkCap = 262144;
constexpr std::int64_t kEnumRefineCap = 1 << 16;

// Abstract value: exact sorted value set when small, interval hull otherwise.
struct AbstractValue {
  bool exact = true;
  std::vector<std::int64_t> values; // sorted, unique (when exact)
  std::int64_t lo = 0, hi = 0;

  static AbstractValue singleton(std::int64_t v) {
    AbstractValue a;
    a.values = {v};
    a.lo = a.hi = v;
    return a;
  }
  static AbstractValue interval(std::int64_t lo, std::int64_t hi) {
    AbstractValue a;
    a.exact = false;
    a.lo = lo;
    a.hi = hi;
    return a;
  }
  static AbstractValue from_domain(const Domain& d) {
    if (!d.is_interval()) {
      AbstractValue a;
      a.values = d.values();
      a.lo = d.lo();
      a.hi = d.hi();
      return a;
    }
    if (static_cast<size_t>(d.size()) <= kValueSetCap) {
      AbstractValue a;
      a.values.reserve(static_cast<size_t>(d.size()));
      for (std::int64_t v = d.lo(); v <= d.hi(); ++v) a.values.push_back(v);
      a.lo = d.lo();
      a.hi = d.hi();
      return a;
    }
    return interval(d.lo(), d.hi());
  }

  bool is_boolish() const { return lo >= 0 && hi <= 1; }
  bool definitely(std::int64_t v) const { return lo == v && hi == v; }

  void normalize() {
    if (!exact) return;
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.size() > kValueSetCap) {
      exact = false;
      lo = values.front();
      hi = values.back();
      values.clear();
    } else if (!values.empty()) {
      lo = values.front();
      hi = values.back();
    }
  }
};

AbstractValue join(const AbstractValue& a, const AbstractValue& b) {
  if (a.exact && b.exact) {
    AbstractValue out;
    out.values = a.values;
    out.values.insert(out.values.end(), b.values.begin(), b.values.end());
    out.normalize();
    return out;
  }
  return AbstractValue::interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

AbstractValue bool_set(bool can_false, bool can_true) {
  AbstractValue out;
  if (can_false) out.values.push_back(0);
  if (can_true) out.values.push_back(1);
  out.normalize();
  return out;
}

class Checker {
 public:
  explicit Checker(DecisionProgram program) : program_(std::move(program)) {}

  void run(ValidatedProgram& out) {
    for (auto& param : program_.params) {
      declare(param.name, param.pos);
    }
    // parameters contribute their domain hulls to the width check
    for (const auto& param : program_.params) {
      check_width(AbstractValue::from_domain(param.domain), param.pos);
    }

    resolve_slots(program_.body); // allocates every local slot

    State state;
    state.defined.assign(slot_names_.size(), false);
    state.values.assign(slot_names_.size(), AbstractValue::singleton(0));
    for (size_t i = 0; i < program_.params.size(); ++i) {
      state.defined[i] = true;
      state.values[i] = AbstractValue::from_domain(program_.params[i].domain);
    }

    if (!body_returns(program_.body)) {
      fail(ErrorCode::MissingReturn, "not every path through '" + program_.name +
                                         "' ends in a return statement");
    }
    analyze_body(program_.body, state);

    ValidatedProgramInit::program(out) = std::move(program_);
    ValidatedProgramInit::slot_count(out) = static_cast<int>(slot_names_.size());
    ValidatedProgramInit::slot_names(out) = slot_names_;
    finalize_output_domain(out);
  }

 private:
  struct State {
    std::vector<bool> defined;
    std::vector<AbstractValue> values;
  };

  void declare(const std::string& name, SourcePos pos) {
    if (slot_of_.count(name)) {
      fail(ErrorCode::DuplicateDefinition, "'" + name + "' is defined more than once", pos);
    }
    slot_of_[name] = static_cast<int>(slot_names_.size());
    slot_names_.push_back(name);
  }

  // First pass: allocate slots for every declaration and resolve references.
  void resolve_slots(std::vector<StmtPtr>& body) {
    for (auto& stmt : body) {
      std::visit(
          [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Stmt::Assign>) {
              resolve_expr(*n.value);
              if (n.declares) {
                declare(n.name, stmt->pos);
              } else if (!slot_of_.count(n.name)) {
                fail(ErrorCode::UnboundVariable,
                     "assignment to undeclared variable '" + n.name + "'", stmt->pos);
              }
              n.slot = slot_of_.at(n.name);
            } else if constexpr (std::is_same_v<T, Stmt::If>) {
              resolve_expr(*n.cond);
              resolve_slots(n.then_body);
              resolve_slots(n.else_body);
            } else {
              resolve_expr(*n.value);
            }
          },
          stmt->node);
    }
  }

  void resolve_expr(Expr& expr) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Expr::VarRef>) {
            auto it = slot_of_.find(n.name);
            if (it == slot_of_.end()) {
              fail(ErrorCode::UnboundVariable, "reference to unknown variable '" + n.name + "'",
                   expr.pos);
            }
            n.slot = it->second;
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            resolve_expr(*n.operand);
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            resolve_expr(*n.lhs);
            resolve_expr(*n.rhs);
          } else if constexpr (std::is_same_v<T, Expr::Cond>) {
            resolve_expr(*n.cond);
            resolve_expr(*n.then_value);
            resolve_expr(*n.else_value);
          }
        },
        expr.node);
  }

  bool body_returns(const std::vector<StmtPtr>& body) const {
    for (const auto& stmt : body) {
      if (std::holds_alternative<Stmt::Return>(stmt->node)) return true;
      if (const auto* iff = std::get_if<Stmt::If>(&stmt->node)) {
        if (!iff->else_body.empty() && body_returns(iff->then_body) &&
            body_returns(iff->else_body)) {
          return true;
        }
      }
    }
    return false;
  }

  void check_width(const AbstractValue& v, SourcePos pos) {
    if (v.lo < kInt32Min || v.hi > kInt32Max) {
      fail(ErrorCode::WidthOverflowRisk,
           "intermediate value may leave 32-bit range (bounds " + std::to_string(v.lo) + " .. " +
               std::to_string(v.hi) + ")",
           pos);
    }
  }

  void require_boolish(const AbstractValue& v, SourcePos pos, const char* where) {
    if (!v.is_boolish()) {
      fail(ErrorCode::DomainMismatch,
           std::string(where) + " must be boolean (value in {0, 1}); bounds are " +
               std::to_string(v.lo) + " .. " + std::to_string(v.hi),
           pos);
    }
  }

  AbstractValue analyze_expr(const Expr& expr, const State& state) {
    AbstractValue out = std::visit(
        [&](const auto& n) -> AbstractValue {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Expr::IntLit>) {
            return AbstractValue::singleton(n.value);
          } else if constexpr (std::is_same_v<T, Expr::VarRef>) {
            if (!state.defined[static_cast<size_t>(n.slot)]) {
              fail(ErrorCode::UnboundVariable,
                   "'" + n.name + "' may be read before assignment", expr.pos);
            }
            return state.values[static_cast<size_t>(n.slot)];
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            AbstractValue a = analyze_expr(*n.operand, state);
            if (n.op == UnOp::Neg) {
              if (a.exact) {
                AbstractValue r;
                for (std::int64_t v : a.values) r.values.push_back(-v);
                r.normalize();
                return r;
              }
              return AbstractValue::interval(-a.hi, -a.lo);
            }
            require_boolish(a, expr.pos, "operand of '!'");
            return bool_set(a.hi == 1, a.lo == 0);
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            return analyze_binary(n, expr.pos, state);
          } else {
            AbstractValue c = analyze_expr(*n.cond, state);
            require_boolish(c, expr.pos, "conditional-expression selector");
            AbstractValue t = analyze_expr(*n.then_value, state);
            AbstractValue e = analyze_expr(*n.else_value, state);
            if (c.definitely(1)) return t;
            if (c.definitely(0)) return e;
            return join(t, e);
          }
        },
        expr.node);
    check_width(out, expr.pos);
    return out;
  }

  AbstractValue analyze_binary(const Expr::Binary& n, SourcePos pos, const State& state) {
    AbstractValue a = analyze_expr(*n.lhs, state);
    AbstractValue b = analyze_expr(*n.rhs, state);
    switch (n.op) {
      case BinOp::And: {
        require_boolish(a, pos, "left operand of '&&'");
        require_boolish(b, pos, "right operand of '&&'");
        bool can_true = a.hi == 1 && b.hi == 1;
        bool can_false = a.lo == 0 || b.lo == 0;
        return bool_set(can_false, can_true);
      }
      case BinOp::Or: {
        require_boolish(a, pos, "left operand of '||'");
        require_boolish(b, pos, "right operand of '||'");
        bool can_true = a.hi == 1 || b.hi == 1;
        bool can_false = a.lo == 0 && b.lo == 0;
        return bool_set(can_false, can_true);
      }
      case BinOp::Add:
      case BinOp::Sub:
      case BinOp::Mul:
        return arith(n.op, a, b);
      default:
        return compare(n.op, a, b);
    }
  }

  static AbstractValue arith(BinOp op, const AbstractValue& a, const AbstractValue& b) {
    if (a.exact && b.exact && a.values.size() * b.values.size() <= kPairWorkCap) {
      AbstractValue out;
      out.values.reserve(std::min(a.values.size() * b.values.size(), kValueSetCap + 1));
      for (std::int64_t x : a.values) {
        for (std::int64_t y : b.values) {
          std::int64_t v = op == BinOp::Add ? x + y : op == BinOp::Sub ? x - y : x * y;
          out.values.push_back(v);
        }
      }
      out.normalize();
      return out;
    }
    if (op == BinOp::Add) return AbstractValue::interval(a.lo + b.lo, a.hi + b.hi);
    if (op == BinOp::Sub) return AbstractValue::interval(a.lo - b.hi, a.hi - b.lo);
    std::int64_t c1 = a.lo * b.lo, c2 = a.lo * b.hi, c3 = a.hi * b.lo, c4 = a.hi * b.hi;
    return AbstractValue::interval(std::min({c1, c2, c3, c4}), std::max({c1, c2, c3, c4}));
  }

  static AbstractValue compare(BinOp op, const AbstractValue& a, const AbstractValue& b) {
    auto cmp = [op](std::int64_t x, std::int64_t y) {
      switch (op) {
        case BinOp::Eq: return x == y;
        case BinOp::Ne: return x != y;
        case BinOp::Lt: return x < y;
        case BinOp::Le: return x <= y;
        case BinOp::Gt: return x > y;
        case BinOp::Ge: return x >= y;
        default: return false;
      }
    };
    if (a.exact && b.exact && a.values.size() * b.values.size() <= kPairWorkCap) {
      bool can_true = false, can_false = false;
      for (std::int64_t x : a.values) {
        for (std::int64_t y : b.values) {
          (cmp(x, y) ? can_true : can_false) = true;
          if (can_true && can_false) break;
        }
        if (can_true && can_false) break;
      }
      return bool_set(can_false, can_true);
    }
    // hull-based decisions
    bool can_true = true, can_false = true;
    switch (op) {
      case BinOp::Lt:
        can_true = a.lo < b.hi;
        can_false = a.hi >= b.lo;
        break;
      case BinOp::Le:
        can_true = a.lo <= b.hi;
        can_false = a.hi > b.lo;
        break;
      case BinOp::Gt:
        can_true = a.hi > b.lo;
        can_false = a.lo <= b.hi;
        break;
      case BinOp::Ge:
        can_true = a.hi >= b.lo;
        can_false = a.lo < b.hi;
        break;
      case BinOp::Eq:
        can_true = a.lo <= b.hi && b.lo <= a.hi;
        can_false = !(a.lo == a.hi && b.lo == b.hi && a.lo == b.lo);
        break;
      case BinOp::Ne:
        can_false = a.lo <= b.hi && b.lo <= a.hi;
        can_true = !(a.lo == a.hi && b.lo == b.hi && a.lo == b.lo);
        break;
      default: break;
    }
    return bool_set(can_false, can_true);
  }

  void analyze_body(const std::vector<StmtPtr>& body, State& state) {
    for (const auto& stmt : body) {
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Stmt::Assign>) {
              AbstractValue v = analyze_expr(*n.value, state);
              state.defined[static_cast<size_t>(n.slot)] = true;
              state.values[static_cast<size_t>(n.slot)] = v;
            } else if constexpr (std::is_same_v<T, Stmt::If>) {
              AbstractValue c = analyze_expr(*n.cond, state);
              require_boolish(c, stmt->pos, "if condition");
              State then_state = state;
              State else_state = state;
              bool then_live = c.hi == 1;
              bool else_live = c.lo == 0;
              if (then_live) analyze_body(n.then_body, then_state);
              if (else_live) analyze_body(n.else_body, else_state);
              if (then_live && else_live) {
                for (size_t s = 0; s < state.defined.size(); ++s) {
                  bool d = then_state.defined[s] && else_state.defined[s];
                  state.defined[s] = d;
                  if (d) state.values[s] = join(then_state.values[s], else_state.values[s]);
                }
              } else {
                state = then_live ? std::move(then_state) : std::move(else_state);
              }
            } else {
              AbstractValue v = analyze_expr(*n.value, state);
              return_value_ =
                  has_return_ ? join(return_value_, v) : v;
              has_return_ = true;
            }
          },
          stmt->node);
      if (std::holds_alternative<Stmt::Return>(stmt->node)) {
        break; // later statements in this list are unreachable
      }
    }
  }

  void finalize_output_domain(ValidatedProgram& out) {
    if (!has_return_) {
      fail(ErrorCode::MissingReturn, "program has no reachable return");
    }
    if (return_value_.exact) {
      ValidatedProgramInit::output_domain(out) = Domain::explicit_set(return_value_.values);
      ValidatedProgramInit::output_domain_exact(out) = true;
      // Refine to the exact reachable set by enumeration when the input space
      // is small; the value-set result can be a superset when variables are
      // correlated.
      maybe_refine_by_enumeration(out);
      return;
    }
    if (!maybe_refine_by_enumeration(out)) {
      ValidatedProgramInit::output_domain(out) = Domain::interval(return_value_.lo, return_value_.hi);
      ValidatedProgramInit::output_domain_exact(out) = false;
    }
  }

  bool maybe_refine_by_enumeration(ValidatedProgram& out) {
    const auto& params = out.program().params;
    std::int64_t points = 1;
    for (const auto& param : params) {
      points *= param.domain.size();
      if (points > kEnumRefineCap || points <= 0) return false;
    }
    std::set<std::int64_t> seen;
    const size_t n = params.size();
    std::vector<std::int64_t> index(n, 0), args(n, 0);
    for (size_t i = 0; i < n; ++i) args[i] = params[i].domain.value_at(0);
    for (;;) {
      seen.insert(evaluate_ordered(out, args.data()));
      size_t k = n;
      while (k > 0 && ++index[k - 1] >= params[k - 1].domain.size()) {
        index[k - 1] = 0;
        args[k - 1] = params[k - 1].domain.value_at(0);
        --k;
      }
      if (k == 0) break;
      args[k - 1] = params[k - 1].domain.value_at(index[k - 1]);
    }
    ValidatedProgramInit::output_domain(out) =
        Domain::explicit_set(std::vector<std::int64_t>(seen.begin(), seen.end()));
    ValidatedProgramInit::output_domain_exact(out) = true;
    return true;
  }

  DecisionProgram program_;
  std::map<std::string, int> slot_of_;
  std::vector<std::string> slot_names_;
  AbstractValue return_value_;
  bool has_return_ = false;
};

} // namespace

bool ValidatedProgram::output_is_boolean() const {
  return output_domain_.lo() >= 0 && output_domain_.hi() <= 1;
}

ValidatedProgram ValidatedProgram::clone() const {
  ValidatedProgram out;
  out.program_ = program_.clone();
  out.output_domain_ = output_domain_;
  out.output_domain_exact_ = output_domain_exact_;
  out.slot_count_ = slot_count_;
  out.slot_names_ = slot_names_;
  return out;
}

ValidatedProgram typecheck(const DecisionProgram& program) {
  ValidatedProgram out;
  Checker checker(program.clone());
  checker.run(out);
  return out;
}

namespace {

std::int64_t eval_expr(const Expr& expr, std::vector<std::int64_t>& env);

std::int64_t eval_binary(const Expr::Binary& n, std::vector<std::int64_t>& env) {
  // && and || short-circuit; all expressions are total so this is purely an
  // evaluation-order detail.
  if (n.op == BinOp::And) {
    return eval_expr(*n.lhs, env) != 0 && eval_expr(*n.rhs, env) != 0 ? 1 : 0;
  }
  if (n.op == BinOp::Or) {
    return eval_expr(*n.lhs, env) != 0 || eval_expr(*n.rhs, env) != 0 ? 1 : 0;
  }
  std::int64_t a = eval_expr(*n.lhs, env);
  std::int64_t b = eval_expr(*n.rhs, env);
  switch (n.op) {
    case BinOp::Add: return a + b;
    case BinOp::Sub: return a - b;
    case BinOp::Mul: return a * b;
    case BinOp::Eq: return a == b ? 1 : 0;
    case BinOp::Ne: return a != b ? 1 : 0;
    case BinOp::Lt: return a < b ? 1 : 0;
    case BinOp::Le: return a <= b ? 1 : 0;
    case BinOp::Gt: return a > b ? 1 : 0;
    case BinOp::Ge: return a >= b ? 1 : 0;
    default: return 0;
  }
}

std::int64_t eval_expr(const Expr& expr, std::vector<std::int64_t>& env) {
  return std::visit(
      [&](const auto& n) -> std::int64_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Expr::VarRef>) {
          return env[static_cast<size_t>(n.slot)];
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          std::int64_t v = eval_expr(*n.operand, env);
          return n.op == UnOp::Neg ? -v : (v == 0 ? 1 : 0);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return eval_binary(n, env);
        } else {
          return eval_expr(*n.cond, env) != 0 ? eval_expr(*n.then_value, env)
                                              : eval_expr(*n.else_value, env);
        }
      },
      expr.node);
}

bool eval_body(const std::vector<StmtPtr>& body, std::vector<std::int64_t>& env,
               std::int64_t& result) {
  for (const auto& stmt : body) {
    bool returned = std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Stmt::Assign>) {
            env[static_cast<size_t>(n.slot)] = eval_expr(*n.value, env);
            return false;
          } else if constexpr (std::is_same_v<T, Stmt::If>) {
            const auto& branch = eval_expr(*n.cond, env) != 0 ? n.then_body : n.else_body;
            return eval_body(branch, env, result);
          } else {
            result = eval_expr(*n.value, env);
            return true;
          }
        },
        stmt->node);
    if (returned) return true;
  }
  return false;
}

} // namespace

std::int64_t evaluate_ordered(const ValidatedProgram& vp, const std::int64_t* args) {
  std::vector<std::int64_t> env(static_cast<size_t>(vp.slot_count()), 0);
  for (size_t i = 0; i < vp.program().params.size(); ++i) env[i] = args[i];
  std::int64_t result = 0;
  bool returned = eval_body(vp.program().body, env, result);
  if (!returned) {
    fail(ErrorCode::Internal, "typechecked program failed to return"); // unreachable
  }
  return result;
}

std::int64_t evaluate(const ValidatedProgram& vp, const Assignment& a) {
  const auto& params = vp.program().params;
  if (a.values.size() != params.size()) {
    fail(ErrorCode::DomainMismatch,
         "assignment binds " + std::to_string(a.values.size()) + " values, program has " +
             std::to_string(params.size()) + " parameters");
  }
  std::vector<std::int64_t> args(params.size(), 0);
  for (size_t i = 0; i < params.size(); ++i) {
    const std::int64_t* v = a.find(params[i].name);
    if (!v) {
      fail(ErrorCode::DomainMismatch, "assignment missing parameter '" + params[i].name + "'");
    }
    if (!params[i].domain.contains(*v)) {
      fail(ErrorCode::DomainMismatch,
           "value " + std::to_string(*v) + " outside domain " + params[i].domain.to_string() +
               " of parameter '" + params[i].name + "'");
    }
    args[i] = *v;
  }
  return evaluate_ordered(vp, args.data());
}

} // namespace fairflow::dsl
