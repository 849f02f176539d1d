#pragma once

#include "core/space.hpp"

namespace fairflow {

enum class Backend { Enumeration, Counting, Cpt };

const char* backend_name(Backend backend);

struct MetricValue {
  Rational exact;
  std::string decimal; // correctly rounded rendering (kDecimalPlaces digits)
  Backend backend = Backend::Enumeration;

  static MetricValue of(Rational value, Backend backend);
};

inline constexpr int kDecimalPlaces = 6;

// Conditional outcome table: prob[(g, u, d)] = Pr[P(G,U)=d | G=g, U=u].
// Deterministic programs yield 0/1 entries; probabilistic tables (conditional
// probability rows) are first-class so randomized decision rules are
// analyzable without a program.
class OutcomeTable {
 public:
  OutcomeTable(std::vector<std::int64_t> groups, std::vector<std::vector<std::int64_t>> u_pts,
               std::vector<std::int64_t> outcomes);

  static OutcomeTable from_program(const dsl::ValidatedProgram& p, const InputSpace& space,
                                   const EnumerationOptions& opts = {});

  const std::vector<std::int64_t>& groups() const { return groups_; }
  const std::vector<std::vector<std::int64_t>>& u_points() const { return u_points_; }
  const std::vector<std::int64_t>& outcomes() const { return outcomes_; }

  const Rational& prob(size_t gi, size_t ui, size_t di) const;
  void set_prob(size_t gi, size_t ui, size_t di, Rational p);

  // Every (g, u) row present and summing to exactly 1; throws IncompleteTable.
  void validate() const;

  int outcome_index(std::int64_t d) const; // -1 if absent

 private:
  std::vector<std::int64_t> groups_;
  std::vector<std::vector<std::int64_t>> u_points_;
  std::vector<std::int64_t> outcomes_;
  std::vector<Rational> probs_; // dense [g][u][d]
  std::vector<bool> present_;
};

// Conditional vulnerability
//   V = sum_u sum_d max_g Pr[U=u] Pr[G=g] Pr[P(g,u)=d]
// (joint form; equal to the posterior form whenever the conditioning events
// have positive mass, and well-defined when they do not).
MetricValue conditional_vulnerability(const OutcomeTable& table,
                                      const std::vector<Rational>& dist_g,
                                      const std::vector<Rational>& dist_u);

// Convenience: builds the table and both marginals from a program and space.
MetricValue conditional_vulnerability(const dsl::ValidatedProgram& p, const InputSpace& space,
                                      const EnumerationOptions& opts = {});

struct SpreadResult {
  MetricValue value;
  std::vector<Rational> per_u; // max-min favorable-probability gap per u point
};

// Fairness spread
//   S = sum_u Pr[U=u] * (max_g mu(g,u) - min_g mu(g,u)),
// mu(g,u) = Pr[P(G,U)=favorable | G=g, U=u]. Requires at most two outcomes.
// Never reads the protected distribution (spread is independent of it).
SpreadResult fairness_spread(const OutcomeTable& table, const std::vector<Rational>& dist_u,
                             std::int64_t favorable = 1);

SpreadResult fairness_spread(const dsl::ValidatedProgram& p, const InputSpace& space,
                             std::int64_t favorable = 1, const EnumerationOptions& opts = {},
                             int jobs = 1);

// The identity route: S = |G| * V - 1 with V computed under uniform G
// (regardless of the declared protected distribution). Must equal
// fairness_spread exactly on the same inputs.
MetricValue fairness_spread_via_vulnerability(const dsl::ValidatedProgram& p,
                                              const InputSpace& space,
                                              std::int64_t favorable = 1,
                                              const EnumerationOptions& opts = {});

// Checks that the requested favorable outcome is usable for the program's
// (at most binary) output domain; throws NonBinaryOutcome otherwise.
void require_binary_outcome(const Domain& output_domain, std::int64_t favorable);

} // namespace fairflow
