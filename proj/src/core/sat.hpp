#pragma once

#include <cstdint>
#include <vector>

namespace fairflow::engine {

// Compact CDCL solver: two-watched literals, first-UIP learning, VSIDS-style
// activities, phase saving and Luby restarts. Clauses may be added between
// solve() calls (the solver is always at decision level 0 outside solve), so
// blocking-clause enumeration runs incrementally on one instance.
class Solver {
 public:
  enum class Result { Sat, Unsat, BudgetExceeded };

  explicit Solver(int num_vars = 0);

  void ensure_vars(int num_vars);
  int num_vars() const { return static_cast<int>(assigns_.size()); }

  // DIMACS-style literals. Returns false when the formula became trivially
  // unsatisfiable at the top level.
  bool add_clause(const std::vector<int>& dimacs_lits);

  // conflict_budget < 0 means unlimited.
  Result solve(std::int64_t conflict_budget = -1);

  // Valid after a Sat result, until the next add_clause/solve. 1-based var.
  bool model_value(int var) const { return model_[static_cast<size_t>(var)]; }
  const std::vector<bool>& model() const { return model_; }
  // Sanity check used by callers: every original clause satisfied.
  bool model_satisfies_clauses() const;

  std::int64_t total_conflicts() const { return total_conflicts_; }

 private:
  using Lit = std::int32_t; // 2*v (positive) or 2*v+1 (negative), v 0-based

  static Lit from_dimacs(int lit) {
    int v = lit > 0 ? lit : -lit;
    return static_cast<Lit>(2 * (v - 1) + (lit < 0 ? 1 : 0));
  }
  static Lit negate(Lit l) { return l ^ 1; }
  static int lit_var(Lit l) { return l >> 1; }
  static bool lit_sign(Lit l) { return l & 1; } // true = negative

  // -1 unassigned, 0 false, 1 true (the variable's value)
  int value_var(int v) const { return assigns_[static_cast<size_t>(v)]; }
  int value_lit(Lit l) const {
    int v = value_var(lit_var(l));
    if (v < 0) return -1;
    return lit_sign(l) ? 1 - v : v;
  }

  void enqueue(Lit l, int reason);
  int propagate(); // returns conflicting clause index or -1
  void analyze(int confl, std::vector<Lit>& learnt, int& backtrack_level);
  void backtrack(int level);
  int pick_branch_var();
  void bump(int v);
  void decay();
  int attach_clause(std::vector<Lit> lits); // returns clause index

  bool ok_ = true;
  std::vector<std::vector<Lit>> clauses_;
  size_t original_clause_count_ = 0;
  std::vector<std::vector<int>> watches_; // per literal
  std::vector<int> assigns_;              // per var
  std::vector<int> levels_;
  std::vector<int> reasons_;
  std::vector<bool> phase_;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;
  std::vector<bool> seen_;
  std::vector<bool> model_;
  std::int64_t total_conflicts_ = 0;
};

} // namespace fairflow::engine
