#pragma once

#include "core/cnf.hpp"
#include "core/quantitative.hpp"
#include "core/sat.hpp"

namespace fairflow::engine {

struct EngineOptions {
  std::int64_t conflict_budget = 1000000; // per projected-count query; <0 unlimited
  EnumerationOptions enumeration;
};

// One element of the projected set: the unprotected input values (space
// component order) and the decision they can produce under some group value.
struct ReachablePoint {
  std::vector<std::int64_t> u_values;
  std::int64_t d = 0;

  bool operator<(const ReachablePoint& o) const {
    if (u_values != o.u_values) return u_values < o.u_values;
    return d < o.d;
  }
  bool operator==(const ReachablePoint& o) const {
    return u_values == o.u_values && d == o.d;
  }
};

struct ProjectedCountResult {
  std::int64_t count = 0;
  std::vector<ReachablePoint> points; // sorted
};

// |{(u, d) : exists g with d = P(g, u)}| by blocking-clause enumeration over
// the (U-bits, D-bits) projection. Every model is checked against the clause
// set before it is counted.
ProjectedCountResult projected_count(const CnfFormula& formula, const EngineOptions& opts = {});

// The same set computed by exhaustive evaluation (the reference oracle).
ProjectedCountResult enumeration_reachable_set(const dsl::ValidatedProgram& p,
                                               const InputSpace& space,
                                               const EnumerationOptions& opts = {});

// V = count / (|U| * |G|); requires uniform G and U (wrap pmfs first) and a
// deterministic program. The count itself is exposed for reporting.
struct CountingVulnerability {
  MetricValue value;
  std::int64_t count = 0;
  std::int64_t u_size = 0;
  std::int64_t g_size = 0;
};

CountingVulnerability vulnerability_by_counting(const dsl::ValidatedProgram& p,
                                                const InputSpace& space,
                                                const EngineOptions& opts = {});

// S = |G| * V - 1 on the counting backend. Valid for any declared protected
// distribution (the spread never depends on it); unprotected pmfs must be
// wrapped to uniform by the caller.
struct CountingSpread {
  MetricValue value;
  std::int64_t count = 0;
};

CountingSpread spread_by_counting(const dsl::ValidatedProgram& p, const InputSpace& space,
                                  std::int64_t favorable = 1, const EngineOptions& opts = {});

struct CrossCheckResult {
  std::int64_t enumeration_count = 0;
  std::int64_t counting_count = 0;
  double enumeration_ms = 0.0;
  double counting_ms = 0.0;
};

// Runs both backends and insists on identical reachable sets; throws
// BackendMismatch with both counts and a distinguishing witness otherwise.
CrossCheckResult cross_check(const dsl::ValidatedProgram& p, const InputSpace& space,
                             const EngineOptions& opts = {});

// Detects a mismatch against a caller-supplied (possibly corrupted) circuit;
// used by fault-injection tests and cross_check internally.
void require_sets_equal(const ProjectedCountResult& oracle, const ProjectedCountResult& candidate,
                        const InputSpace& space);

} // namespace fairflow::engine
