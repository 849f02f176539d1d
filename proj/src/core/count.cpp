#include "core/count.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace fairflow::engine {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

} // namespace

ProjectedCountResult projected_count(const CnfFormula& formula, const EngineOptions& opts) {
  Solver solver(formula.num_vars);
  for (const auto& clause : formula.clauses) {
    if (!solver.add_clause(clause)) {
      return ProjectedCountResult{}; // domain constraints unsatisfiable: empty projection
    }
  }

  ProjectedCountResult result;
  for (;;) {
    Solver::Result r = solver.solve(opts.conflict_budget);
    if (r == Solver::Result::BudgetExceeded) {
      fail(ErrorCode::SolverBudgetExceeded,
           "projected count exceeded the conflict budget of " +
               std::to_string(opts.conflict_budget));
    }
    if (r == Solver::Result::Unsat) break;

    if (!solver.model_satisfies_clauses()) {
      fail(ErrorCode::Internal, "solver returned a model violating its clauses");
    }

    ReachablePoint point;
    std::vector<int> blocking;
    for (const auto& group : formula.u_inputs) {
      point.u_values.push_back(formula.decode(group, solver.model()));
      for (int var : group.vars) {
        blocking.push_back(solver.model_value(var) ? -var : var);
      }
    }
    point.d = formula.decode_output(solver.model());
    for (int var : formula.d_vars) {
      blocking.push_back(solver.model_value(var) ? -var : var);
    }
    result.points.push_back(std::move(point));

    if (!solver.add_clause(blocking)) break; // blocked everything
  }
  std::sort(result.points.begin(), result.points.end());
  result.count = static_cast<std::int64_t>(result.points.size());
  return result;
}

ProjectedCountResult enumeration_reachable_set(const dsl::ValidatedProgram& p,
                                               const InputSpace& space,
                                               const EnumerationOptions& opts) {
  SpaceBinding binding = SpaceBinding::bind(p, space);
  const Domain& gdom = space.protected_input.domain;
  ProjectedCountResult result;
  std::vector<std::int64_t> args(static_cast<size_t>(p.param_count()), 0);
  std::set<std::int64_t> decisions;
  for_each_u(space, opts, [&](const UPoint& u) {
    decisions.clear();
    for (std::int64_t gi = 0; gi < gdom.size(); ++gi) {
      binding.fill_args(gdom.value_at(gi), u.values, args);
      decisions.insert(dsl::evaluate_ordered(p, args.data()));
    }
    for (std::int64_t d : decisions) {
      result.points.push_back(ReachablePoint{u.values, d});
    }
  });
  std::sort(result.points.begin(), result.points.end());
  result.count = static_cast<std::int64_t>(result.points.size());
  return result;
}

namespace {

void require_uniform(const InputSpace& space, bool require_g) {
  if (require_g && !space.g_uniform()) {
    fail(ErrorCode::NonUniformDistribution,
         "counting requires a uniform protected distribution");
  }
  if (!space.u_all_uniform()) {
    fail(ErrorCode::NonUniformDistribution,
         "counting requires uniform unprotected distributions; wrap pmfs into uniform "
         "selector domains first");
  }
}

} // namespace

CountingVulnerability vulnerability_by_counting(const dsl::ValidatedProgram& p,
                                                const InputSpace& space,
                                                const EngineOptions& opts) {
  require_uniform(space, /*require_g=*/true);
  SpaceBinding binding = SpaceBinding::bind(p, space);
  Circuit circuit = bitblast(p);
  CnfFormula formula = to_cnf(circuit, binding, space);
  ProjectedCountResult counted = projected_count(formula, opts);

  CountingVulnerability result;
  result.count = counted.count;
  result.u_size = space.u_point_count();
  result.g_size = space.group_count();
  Rational v = Rational::from_int64(counted.count) /
               (Rational::from_int64(result.u_size) * Rational::from_int64(result.g_size));
  result.value = MetricValue::of(std::move(v), Backend::Counting);
  return result;
}

CountingSpread spread_by_counting(const dsl::ValidatedProgram& p, const InputSpace& space,
                                  std::int64_t favorable, const EngineOptions& opts) {
  require_binary_outcome(p.output_domain(), favorable);
  require_uniform(space, /*require_g=*/false);
  SpaceBinding binding = SpaceBinding::bind(p, space);
  Circuit circuit = bitblast(p);
  CnfFormula formula = to_cnf(circuit, binding, space);
  ProjectedCountResult counted = projected_count(formula, opts);

  // S = |G| * V - 1 = count/|U| - 1 under uniform G; the declared protected
  // distribution is irrelevant to the spread.
  CountingSpread result;
  result.count = counted.count;
  Rational s = Rational::from_int64(counted.count) /
                   Rational::from_int64(space.u_point_count()) -
               Rational(1);
  result.value = MetricValue::of(std::move(s), Backend::Counting);
  return result;
}

void require_sets_equal(const ProjectedCountResult& oracle, const ProjectedCountResult& candidate,
                        const InputSpace& space) {
  if (oracle.points == candidate.points) return;

  // first element of the symmetric difference, as a witness
  std::string witness = "?";
  std::vector<ReachablePoint> diff;
  std::set_symmetric_difference(oracle.points.begin(), oracle.points.end(),
                                candidate.points.begin(), candidate.points.end(),
                                std::back_inserter(diff));
  if (!diff.empty()) {
    const ReachablePoint& w = diff.front();
    witness = "(";
    for (size_t i = 0; i < w.u_values.size(); ++i) {
      if (i) witness += ", ";
      witness += space.unprotected[i].name + "=" + std::to_string(w.u_values[i]);
    }
    witness += ", d=" + std::to_string(w.d) + ")";
    witness += oracle.points.end() !=
                       std::find(oracle.points.begin(), oracle.points.end(), w)
                   ? " reachable per enumeration but not counted"
                   : " counted but not reachable per enumeration";
  }
  fail(ErrorCode::BackendMismatch,
       "backend disagreement: enumeration count " + std::to_string(oracle.count) +
           ", projected count " + std::to_string(candidate.count) + "; witness " + witness);
}

CrossCheckResult cross_check(const dsl::ValidatedProgram& p, const InputSpace& space,
                             const EngineOptions& opts) {
  require_uniform(space, /*require_g=*/false);
  SpaceBinding binding = SpaceBinding::bind(p, space);

  CrossCheckResult result;
  auto t0 = std::chrono::steady_clock::now();
  ProjectedCountResult oracle = enumeration_reachable_set(p, space, opts.enumeration);
  result.enumeration_ms = ms_since(t0);
  result.enumeration_count = oracle.count;

  auto t1 = std::chrono::steady_clock::now();
  Circuit circuit = bitblast(p);
  CnfFormula formula = to_cnf(circuit, binding, space);
  ProjectedCountResult counted = projected_count(formula, opts);
  result.counting_ms = ms_since(t1);
  result.counting_count = counted.count;

  require_sets_equal(oracle, counted, space);
  return result;
}

} // namespace fairflow::engine
