#pragma once

#include <optional>
#include <set>

#include "core/qualitative.hpp"
#include "core/quantitative.hpp"

namespace fairflow {

struct BackgroundVar {
  std::string name;
  Domain domain;
  Distribution dist;
  SourcePos pos;
};

struct Equation {
  std::string name;
  dsl::ExprPtr expr; // over background vars and earlier equation vars only
  SourcePos pos;

  Equation clone() const { return Equation{name, expr->clone(), pos}; }
};

// A deterministic structural model: ordered equations over latent background
// variables. Definition order witnesses acyclicity. Loaded from `.scm` files:
//   bg B1 : [0,9] ~ uniform
//   let group = B1
//   let zipCode = (group >= 6) ? B3 : B4
//   protected group
struct CausalModel {
  std::vector<BackgroundVar> background;
  std::vector<Equation> equations;
  std::string protected_name; // empty when the file declares none

  CausalModel clone() const;
  bool has_variable(const std::string& name) const;
  bool has_equation(const std::string& name) const;

  const std::string& require_protected() const;
};

CausalModel parse_model(const dsl::SourceProgram& src);

struct CausalOptions {
  EnumerationOptions enumeration;
  int jobs = 1;
  std::int64_t favorable = 1;
};

// The lowered self-composition artifacts every causal analysis runs on:
//   symbolic        (g^, B) -> d   protected equation replaced by the fresh
//                                  intervention parameter g^ (and path-
//                                  clamped variables pinned to their factual
//                                  values computed from B)
//   factual         B -> d         plain composition
//   protected_value B -> g         factual protected value
// plus the input space over (g^, B) with g^ uniform on the protected
// variable's attainable value set.
struct CausalFrame {
  dsl::ValidatedProgram symbolic;
  dsl::ValidatedProgram factual;
  dsl::ValidatedProgram protected_value;
  InputSpace symbolic_space;
  Domain group_domain = Domain::interval(0, 0); // attainable protected values
  std::string intervention_param;
};

CausalFrame build_causal_frame(const dsl::ValidatedProgram& p, const CausalModel& c,
                               const std::vector<std::string>& clamped = {});

// Composition of a decision program with a model, optionally under an
// intervention on the protected variable. Evaluation is total and
// deterministic in the background assignment.
class ComposedProgram {
 public:
  static ComposedProgram compose(const dsl::ValidatedProgram& p, const CausalModel& c);
  static ComposedProgram compose_intervened(const dsl::ValidatedProgram& p, const CausalModel& c,
                                            std::int64_t g);

  // background values in model declaration order
  std::int64_t evaluate(const std::vector<std::int64_t>& background_values) const;
  std::int64_t evaluate(const dsl::Assignment& background) const;

  const std::optional<std::int64_t>& intervention() const { return intervention_; }
  const dsl::ValidatedProgram& lowered() const { return lowered_; }

 private:
  dsl::ValidatedProgram lowered_; // params = background vars in order
  std::optional<std::int64_t> intervention_;
};

// S over the background space:
//   S = sum_b Pr[B=b] * (max_g P^(g,b) - min_g P^(g,b))
SpreadResult spread_over_background(const dsl::ValidatedProgram& p, const CausalModel& c,
                                    const CausalOptions& opts = {});

// Counterfactual fairness <=> spread over background is exactly 0. The
// witness on failure names a background point and two interventions.
Verdict check_counterfactual_fairness(const dsl::ValidatedProgram& p, const CausalModel& c,
                                      const CausalOptions& opts = {});

// Pr[some intervention flips the factual decision] — bounded by the spread,
// with equality when only two groups exist (and identically for deterministic
// models, where any two differing interventions include the factual one).
MetricValue prob_deviating_counterfactual(const dsl::ValidatedProgram& p, const CausalModel& c,
                                          const CausalOptions& opts = {});

// Path-specific spread: counterfactual runs clamp every variable in `paths`
// to its factual value computed from the same background point.
SpreadResult path_specific_spread(const dsl::ValidatedProgram& p, const CausalModel& c,
                                  const std::vector<std::string>& paths,
                                  const CausalOptions& opts = {});

} // namespace fairflow
