#pragma once

#include <optional>

#include "core/space.hpp"

namespace fairflow {

// A concrete violation of a two-run property: two group values leading to
// different decisions for the same unprotected point. Always re-verifiable
// through evaluation.
struct Counterexample {
  std::int64_t g1 = 0, g2 = 0;
  std::vector<std::pair<std::string, std::int64_t>> u; // unprotected bindings
  std::int64_t d1 = 0, d2 = 0;
};

struct Verdict {
  bool holds = true;
  std::optional<Counterexample> witness; // present iff !holds
};

// Exact conditional outcome distribution per group: rows[gi][di] =
// Pr[P(G,U)=d | G=g] (conditioned further when a condition applies).
struct ParityTable {
  std::vector<std::int64_t> groups;
  std::vector<std::int64_t> outcomes;
  std::vector<std::vector<Rational>> rows;
  Rational max_gap;
  // argmax of the gap, defined when max_gap > 0
  std::int64_t gap_g1 = 0, gap_g2 = 0, gap_d = 0;
};

struct ParityResult {
  ParityTable table;
  bool holds = true; // max_gap <= tol
  // Pointwise counterexample when one exists (always for the unconditional
  // check; a conditional gap need not have one, since the conditioned
  // u-distributions may differ between groups).
  std::optional<Counterexample> witness;
};

struct CheckOptions {
  EnumerationOptions enumeration;
  int jobs = 1;
};

// Unconditional noninterference: P(g1,u) = P(g2,u) for all g1, g2, u.
// On violation the witness is the lexicographically first one under
// (u, g1, g2) ordering.
Verdict check_unconditional_ni(const dsl::ValidatedProgram& p, const InputSpace& space,
                               const CheckOptions& opts = {});

// Restricted information flow for classifier R (same inputs as p):
// R(g1,u) = R(g2,u) implies P(g1,u) = P(g2,u).
// NOTE: this verdict carries no demographic-parity guarantee, conditional or
// otherwise; reports attach kFlowVerdictCaveat verbatim.
Verdict check_restricted_if(const dsl::ValidatedProgram& p, const dsl::ValidatedProgram& r,
                            const InputSpace& space, const CheckOptions& opts = {});

// Conditional information flow for boolean predicate psi:
// !psi(g1,u) and !psi(g2,u) implies P(g1,u) = P(g2,u). Same caveat applies.
Verdict check_conditional_if(const dsl::ValidatedProgram& p, const dsl::ValidatedProgram& psi,
                             const InputSpace& space, const CheckOptions& opts = {});

// Demographic parity: group-conditional outcome distributions agree up to
// `tol` (exact rational comparison, default 0).
ParityResult demographic_parity(const dsl::ValidatedProgram& p, const InputSpace& space,
                                const Rational& tol = Rational(0),
                                const CheckOptions& opts = {});

// Parity under the conditioned joint distribution {cond(G,U) = 1}.
ParityResult conditional_demographic_parity(const dsl::ValidatedProgram& p,
                                            const dsl::ValidatedProgram& cond,
                                            const InputSpace& space,
                                            const Rational& tol = Rational(0),
                                            const CheckOptions& opts = {});

// Fixed caveat attached to every restricted/conditional information-flow
// verdict (asserted verbatim by tests and the report layer).
inline constexpr const char* kFlowVerdictCaveat =
    "A restricted/conditional information-flow verdict carries no demographic-parity "
    "guarantee, conditional or otherwise: conditioning reweights the unprotected "
    "distribution per group, so equal treatment within classes does not imply equal "
    "group-conditional outcome rates.";

} // namespace fairflow
