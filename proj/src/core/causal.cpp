#include "core/causal.hpp"

#include <algorithm>

#include "core/parser.hpp"

namespace fairflow {

namespace {

using dsl::DecisionProgram;
using dsl::Expr;
using dsl::ExprPtr;
using dsl::Stmt;
using dsl::StmtPtr;
using dsl::ValidatedProgram;

void rename_refs(Expr& expr, const std::map<std::string, std::string>& renames) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::VarRef>) {
          auto it = renames.find(n.name);
          if (it != renames.end()) n.name = it->second;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          rename_refs(*n.operand, renames);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          rename_refs(*n.lhs, renames);
          rename_refs(*n.rhs, renames);
        } else if constexpr (std::is_same_v<T, Expr::Cond>) {
          rename_refs(*n.cond, renames);
          rename_refs(*n.then_value, renames);
          rename_refs(*n.else_value, renames);
        }
      },
      expr.node);
}

void rename_body(std::vector<StmtPtr>& body, const std::map<std::string, std::string>& renames) {
  for (auto& stmt : body) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Stmt::Assign>) {
            auto it = renames.find(n.name);
            if (it != renames.end()) n.name = it->second;
            rename_refs(*n.value, renames);
          } else if constexpr (std::is_same_v<T, Stmt::If>) {
            rename_refs(*n.cond, renames);
            rename_body(n.then_body, renames);
            rename_body(n.else_body, renames);
          } else {
            rename_refs(*n.value, renames);
          }
        },
        stmt->node);
  }
}

void collect_assigned_names(const std::vector<StmtPtr>& body, std::set<std::string>& out) {
  for (const auto& stmt : body) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Stmt::Assign>) {
            out.insert(n.name);
          } else if constexpr (std::is_same_v<T, Stmt::If>) {
            collect_assigned_names(n.then_body, out);
            collect_assigned_names(n.else_body, out);
          }
        },
        stmt->node);
  }
}

StmtPtr make_let(const std::string& name, ExprPtr value, SourcePos pos = {}) {
  auto stmt = std::make_unique<Stmt>();
  stmt->pos = pos;
  stmt->node = Stmt::Assign{name, std::move(value), true, -1};
  return stmt;
}

StmtPtr make_return(ExprPtr value, SourcePos pos = {}) {
  auto stmt = std::make_unique<Stmt>();
  stmt->pos = pos;
  stmt->node = Stmt::Return{std::move(value)};
  return stmt;
}

std::string fresh_name(std::string base, std::set<std::string>& used) {
  std::string name = std::move(base);
  while (used.count(name)) name += "_";
  used.insert(name);
  return name;
}

} // namespace

CausalModel CausalModel::clone() const {
  CausalModel out;
  out.background = background;
  out.equations.reserve(equations.size());
  for (const auto& eq : equations) out.equations.push_back(eq.clone());
  out.protected_name = protected_name;
  return out;
}

bool CausalModel::has_variable(const std::string& name) const {
  for (const auto& bg : background) {
    if (bg.name == name) return true;
  }
  return has_equation(name);
}

bool CausalModel::has_equation(const std::string& name) const {
  for (const auto& eq : equations) {
    if (eq.name == name) return true;
  }
  return false;
}

const std::string& CausalModel::require_protected() const {
  if (protected_name.empty()) {
    fail(ErrorCode::Config,
         "causal analysis needs a protected variable; add 'protected <name>' to the model");
  }
  return protected_name;
}

CausalModel parse_model(const dsl::SourceProgram& src) {
  dsl::TokenCursor cursor(dsl::tokenize(src.text, src.origin), src.origin);
  CausalModel model;
  std::set<std::string> declared;

  auto check_refs = [&](const Expr& expr, auto&& self) -> void {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Expr::VarRef>) {
            if (!declared.count(n.name)) {
              fail(ErrorCode::UnboundVariable,
                   "equation references '" + n.name +
                       "', which is not a background variable or an earlier equation",
                   expr.pos);
            }
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            self(*n.operand, self);
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            self(*n.lhs, self);
            self(*n.rhs, self);
          } else if constexpr (std::is_same_v<T, Expr::Cond>) {
            self(*n.cond, self);
            self(*n.then_value, self);
            self(*n.else_value, self);
          }
        },
        expr.node);
  };

  while (!cursor.at(dsl::TokKind::Eof)) {
    if (cursor.at_ident("bg")) {
      dsl::Token kw = cursor.take();
      dsl::Token name = cursor.expect(dsl::TokKind::Ident, "as background variable name");
      if (declared.count(name.text)) {
        fail(ErrorCode::DuplicateDefinition, "'" + name.text + "' is declared twice", name.pos);
      }
      cursor.expect(dsl::TokKind::Colon, "after background variable name");
      Domain domain = cursor.parse_domain();
      cursor.expect(dsl::TokKind::Tilde, "before background distribution");
      Distribution dist = Distribution::uniform();
      if (cursor.at_ident("uniform")) {
        cursor.take();
      } else if (cursor.at_ident("pmf")) {
        cursor.take();
        cursor.expect(dsl::TokKind::LBrace, "to open pmf");
        std::map<std::int64_t, Rational> masses;
        do {
          std::int64_t value = cursor.parse_signed_int("as pmf value");
          cursor.expect(dsl::TokKind::Colon, "after pmf value");
          std::int64_t num = cursor.parse_signed_int("as pmf mass");
          Rational mass = Rational::from_int64(num);
          if (cursor.accept(dsl::TokKind::Slash)) {
            std::int64_t den = cursor.parse_signed_int("as pmf mass denominator");
            mass = mass / Rational::from_int64(den);
          }
          if (!masses.emplace(value, mass).second) {
            fail(ErrorCode::DuplicateDefinition,
                 "pmf lists value " + std::to_string(value) + " twice", name.pos);
          }
        } while (cursor.accept(dsl::TokKind::Comma));
        cursor.expect(dsl::TokKind::RBrace, "to close pmf");
        dist = Distribution::pmf(std::move(masses));
      } else {
        cursor.error("expected 'uniform' or 'pmf' after '~'");
      }
      dist.validate(domain, name.text);
      declared.insert(name.text);
      model.background.push_back(BackgroundVar{name.text, domain, dist, kw.pos});
      cursor.accept(dsl::TokKind::Semicolon);
      continue;
    }
    if (cursor.at_ident("let")) {
      cursor.take();
      dsl::Token name = cursor.expect(dsl::TokKind::Ident, "as equation name");
      if (declared.count(name.text)) {
        fail(ErrorCode::DuplicateDefinition, "'" + name.text + "' is declared twice", name.pos);
      }
      cursor.expect(dsl::TokKind::Assign, "in equation");
      ExprPtr expr = cursor.parse_expr();
      check_refs(*expr, check_refs);
      declared.insert(name.text);
      model.equations.push_back(Equation{name.text, std::move(expr), name.pos});
      cursor.accept(dsl::TokKind::Semicolon);
      continue;
    }
    if (cursor.at_ident("protected")) {
      dsl::Token kw = cursor.take();
      dsl::Token name = cursor.expect(dsl::TokKind::Ident, "as protected variable name");
      if (!model.protected_name.empty()) {
        fail(ErrorCode::DuplicateDefinition, "model declares two protected variables", kw.pos);
      }
      model.protected_name = name.text;
      cursor.accept(dsl::TokKind::Semicolon);
      continue;
    }
    cursor.error("expected 'bg', 'let' or 'protected' declaration");
  }

  if (model.background.empty()) {
    fail(ErrorCode::Config, "model declares no background variables (in " + src.origin + ")");
  }
  if (!model.protected_name.empty() && !model.has_equation(model.protected_name)) {
    fail(ErrorCode::Config,
         "protected variable '" + model.protected_name +
             "' must be defined by an equation (bind it with 'let " + model.protected_name +
             " = ...')");
  }
  return model;
}

namespace {

struct LowerOptions {
  // Exactly one of these shapes the protected equation:
  bool symbolic = false;                          // replace with a fresh parameter
  std::optional<std::int64_t> constant;           // replace with a constant
  std::vector<std::string> clamped;               // counterfactual pass pins these to factual
  std::optional<Domain> symbolic_domain;          // domain of the fresh parameter
  std::string symbolic_name;
  // When set, the lowered program returns this model variable instead of
  // running the decision body (used for attainable-value probes).
  std::optional<std::string> probe_variable;
};

DecisionProgram lower_composition(const ValidatedProgram& p, const CausalModel& c,
                                  const LowerOptions& opts) {
  const std::string& prot = c.protected_name;
  std::set<std::string> used;
  for (const auto& bg : c.background) used.insert(bg.name);
  for (const auto& eq : c.equations) used.insert(eq.name);
  if (opts.symbolic) used.insert(opts.symbolic_name);

  bool needs_factual_pass = !opts.clamped.empty();
  std::map<std::string, std::string> factual_renames;
  if (needs_factual_pass) {
    for (const auto& eq : c.equations) {
      factual_renames[eq.name] = fresh_name(eq.name + "__f", used);
    }
  }

  DecisionProgram out;
  out.name = p.program().name + "_composed";
  if (opts.symbolic) {
    out.params.push_back(dsl::Param{opts.symbolic_name, *opts.symbolic_domain, {}});
  }
  for (const auto& bg : c.background) {
    out.params.push_back(dsl::Param{bg.name, bg.domain, bg.pos});
  }

  if (needs_factual_pass) {
    for (const auto& eq : c.equations) {
      ExprPtr expr = eq.expr->clone();
      rename_refs(*expr, factual_renames);
      out.body.push_back(make_let(factual_renames.at(eq.name), std::move(expr), eq.pos));
    }
  }

  std::set<std::string> clamp_set(opts.clamped.begin(), opts.clamped.end());
  for (const auto& eq : c.equations) {
    ExprPtr expr;
    if (eq.name == prot && (opts.symbolic || opts.constant)) {
      expr = opts.symbolic ? dsl::make_var(opts.symbolic_name) : dsl::make_int(*opts.constant);
    } else if (clamp_set.count(eq.name)) {
      expr = dsl::make_var(factual_renames.at(eq.name));
    } else {
      expr = eq.expr->clone();
    }
    out.body.push_back(make_let(eq.name, std::move(expr), eq.pos));
  }

  if (opts.probe_variable) {
    out.body.push_back(make_return(dsl::make_var(*opts.probe_variable)));
    return out;
  }

  // Splice the decision body; parameters resolve to the equally named model
  // variables, locals get collision-free names.
  std::set<std::string> locals;
  collect_assigned_names(p.program().body, locals);
  std::map<std::string, std::string> local_renames;
  for (const auto& param : p.program().params) locals.erase(param.name);
  for (const auto& name : locals) {
    if (used.count(name)) {
      local_renames[name] = fresh_name(name + "__d", used);
    } else {
      used.insert(name);
    }
  }
  std::vector<StmtPtr> decision_body = dsl::clone_body(p.program().body);
  if (!local_renames.empty()) rename_body(decision_body, local_renames);
  for (auto& stmt : decision_body) out.body.push_back(std::move(stmt));
  return out;
}

// Exact attainable values of `variable` across the whole (intervened) space.
Domain attained_domain(const ValidatedProgram& p, const CausalModel& c, const LowerOptions& base,
                       const std::string& variable) {
  LowerOptions opts = base;
  opts.probe_variable = variable;
  ValidatedProgram probe = dsl::typecheck(lower_composition(p, c, opts));
  if (!probe.output_domain_exact()) {
    fail(ErrorCode::SpaceTooLarge,
         "cannot compute the exact attainable values of '" + variable +
             "'; background space too large for enumeration");
  }
  return probe.output_domain();
}

void check_exposure(const ValidatedProgram& p, const CausalModel& c) {
  for (const auto& param : p.program().params) {
    if (!c.has_variable(param.name)) {
      fail(ErrorCode::ExposureMismatch,
           "program parameter '" + param.name + "' is not a variable of the causal model");
    }
  }
}

} // namespace

CausalFrame build_causal_frame(const ValidatedProgram& p, const CausalModel& c,
                               const std::vector<std::string>& clamped) {
  check_exposure(p, c);
  const std::string& prot = c.require_protected();

  for (const auto& name : clamped) {
    if (name == prot) {
      fail(ErrorCode::ProtectedVariableClamped,
           "protected variable '" + prot + "' cannot be path-clamped");
    }
    if (!c.has_equation(name)) {
      fail(ErrorCode::DomainMismatch,
           "path variable '" + name + "' is not an equation of the causal model");
    }
  }

  CausalFrame frame;

  // factual composition and protected-value probe share a plain lowering
  LowerOptions plain;
  frame.factual = dsl::typecheck(lower_composition(p, c, plain));
  frame.group_domain = attained_domain(p, c, plain, prot);

  LowerOptions probe_prot = plain;
  probe_prot.probe_variable = prot;
  frame.protected_value = dsl::typecheck(lower_composition(p, c, probe_prot));

  std::set<std::string> used;
  for (const auto& bg : c.background) used.insert(bg.name);
  for (const auto& eq : c.equations) used.insert(eq.name);
  LowerOptions sym;
  sym.symbolic = true;
  sym.symbolic_name = fresh_name(prot + "_cf", used);
  sym.symbolic_domain = frame.group_domain;
  sym.clamped = clamped;
  frame.intervention_param = sym.symbolic_name;
  frame.symbolic = dsl::typecheck(lower_composition(p, c, sym));

  // The decision body runs on whatever values the model produces, which may
  // leave the program's declared analysis domains (the model, not the
  // declaration, defines the composed input space). Width safety is
  // re-established by typechecking the lowered program over the background
  // domains.

  frame.symbolic_space.protected_input =
      SpaceComponent{frame.intervention_param, frame.group_domain, Distribution::uniform()};
  for (const auto& bg : c.background) {
    frame.symbolic_space.unprotected.push_back(SpaceComponent{bg.name, bg.domain, bg.dist});
  }
  return frame;
}

ComposedProgram ComposedProgram::compose(const ValidatedProgram& p, const CausalModel& c) {
  check_exposure(p, c);
  ComposedProgram composed;
  composed.lowered_ = dsl::typecheck(lower_composition(p, c, LowerOptions{}));
  return composed;
}

ComposedProgram ComposedProgram::compose_intervened(const ValidatedProgram& p,
                                                    const CausalModel& c, std::int64_t g) {
  check_exposure(p, c);
  const std::string& prot = c.require_protected();
  Domain gdom = attained_domain(p, c, LowerOptions{}, prot);
  if (!gdom.contains(g)) {
    fail(ErrorCode::DomainMismatch,
         "intervention value " + std::to_string(g) + " is outside the protected domain " +
             gdom.to_string());
  }
  LowerOptions opts;
  opts.constant = g;
  ComposedProgram composed;
  composed.lowered_ = dsl::typecheck(lower_composition(p, c, opts));
  composed.intervention_ = g;
  return composed;
}

std::int64_t ComposedProgram::evaluate(const std::vector<std::int64_t>& background_values) const {
  if (background_values.size() != lowered_.program().params.size()) {
    fail(ErrorCode::DomainMismatch, "background assignment has wrong arity");
  }
  return dsl::evaluate_ordered(lowered_, background_values.data());
}

std::int64_t ComposedProgram::evaluate(const dsl::Assignment& background) const {
  return dsl::evaluate(lowered_, background);
}

SpreadResult spread_over_background(const ValidatedProgram& p, const CausalModel& c,
                                    const CausalOptions& opts) {
  CausalFrame frame = build_causal_frame(p, c);
  require_binary_outcome(frame.symbolic.output_domain(), opts.favorable);
  return fairness_spread(frame.symbolic, frame.symbolic_space, opts.favorable, opts.enumeration,
                         opts.jobs);
}

Verdict check_counterfactual_fairness(const ValidatedProgram& p, const CausalModel& c,
                                      const CausalOptions& opts) {
  CausalFrame frame = build_causal_frame(p, c);
  require_binary_outcome(frame.symbolic.output_domain(), opts.favorable);
  CheckOptions check_opts;
  check_opts.enumeration = opts.enumeration;
  check_opts.jobs = opts.jobs;
  return check_unconditional_ni(frame.symbolic, frame.symbolic_space, check_opts);
}

MetricValue prob_deviating_counterfactual(const ValidatedProgram& p, const CausalModel& c,
                                          const CausalOptions& opts) {
  CausalFrame frame = build_causal_frame(p, c);
  require_binary_outcome(frame.symbolic.output_domain(), opts.favorable);

  const Domain& gdom = frame.group_domain;
  Rational prob(0);
  std::vector<std::int64_t> sym_args(frame.symbolic.program().params.size(), 0);
  for_each_components(frame.symbolic_space.unprotected, opts.enumeration, [&](const UPoint& b) {
    std::int64_t factual = dsl::evaluate_ordered(frame.factual, b.values.data());
    for (size_t i = 0; i < b.values.size(); ++i) sym_args[i + 1] = b.values[i];
    for (std::int64_t gi = 0; gi < gdom.size(); ++gi) {
      sym_args[0] = gdom.value_at(gi);
      if (dsl::evaluate_ordered(frame.symbolic, sym_args.data()) != factual) {
        prob += b.weight;
        break;
      }
    }
  });
  return MetricValue::of(std::move(prob), Backend::Enumeration);
}

SpreadResult path_specific_spread(const ValidatedProgram& p, const CausalModel& c,
                                  const std::vector<std::string>& paths,
                                  const CausalOptions& opts) {
  CausalFrame frame = build_causal_frame(p, c, paths);
  require_binary_outcome(frame.symbolic.output_domain(), opts.favorable);
  return fairness_spread(frame.symbolic, frame.symbolic_space, opts.favorable, opts.enumeration,
                         opts.jobs);
}

} // namespace fairflow
