#include "core/sat.hpp"

#include <algorithm>
#include <cmath>

namespace fairflow::engine {

namespace {

// Luby restart sequence (1, 1, 2, 1, 1, 2, 4, ...)
std::int64_t luby(std::int64_t x) {
  std::int64_t size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return 1LL << seq;
}

constexpr double kVarDecay = 1.0 / 0.95;
constexpr double kActivityLimit = 1e100;
constexpr std::int64_t kRestartBase = 64;

} // namespace

Solver::Solver(int num_vars) {
  ensure_vars(num_vars);
}

void Solver::ensure_vars(int num_vars) {
  while (static_cast<int>(assigns_.size()) < num_vars) {
    assigns_.push_back(-1);
    levels_.push_back(0);
    reasons_.push_back(-1);
    phase_.push_back(false);
    activity_.push_back(0.0);
    seen_.push_back(false);
    watches_.emplace_back();
    watches_.emplace_back();
  }
}

int Solver::attach_clause(std::vector<Lit> lits) {
  clauses_.push_back(std::move(lits));
  int ci = static_cast<int>(clauses_.size() - 1);
  const auto& c = clauses_.back();
  watches_[static_cast<size_t>(negate(c[0]))].push_back(ci);
  watches_[static_cast<size_t>(negate(c[1]))].push_back(ci);
  return ci;
}

bool Solver::add_clause(const std::vector<int>& dimacs_lits) {
  if (!ok_) return false;

  std::vector<Lit> lits;
  lits.reserve(dimacs_lits.size());
  for (int dl : dimacs_lits) {
    Lit l = from_dimacs(dl);
    ensure_vars(lit_var(l) + 1);
    lits.push_back(l);
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());

  // tautology / level-0 simplification
  std::vector<Lit> kept;
  for (size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && lits[i + 1] == negate(lits[i]) && lit_var(lits[i + 1]) == lit_var(lits[i])) {
      return true; // p and !p in one clause
    }
    int v = value_lit(lits[i]);
    if (v == 1) return true;   // already satisfied at level 0
    if (v == 0) continue;      // falsified at level 0: drop literal
    kept.push_back(lits[i]);
  }

  if (kept.empty()) {
    ok_ = false;
    return false;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() != -1) {
      ok_ = false;
      return false;
    }
    return true;
  }
  attach_clause(std::move(kept));
  original_clause_count_ = clauses_.size();
  return true;
}

void Solver::enqueue(Lit l, int reason) {
  int v = lit_var(l);
  assigns_[static_cast<size_t>(v)] = lit_sign(l) ? 0 : 1;
  levels_[static_cast<size_t>(v)] = static_cast<int>(trail_lim_.size());
  reasons_[static_cast<size_t>(v)] = reason;
  trail_.push_back(l);
}

int Solver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    // clauses watching !p must be inspected
    std::vector<int>& ws = watches_[static_cast<size_t>(p)];
    size_t i = 0, j = 0;
    while (i < ws.size()) {
      int ci = ws[i];
      std::vector<Lit>& c = clauses_[static_cast<size_t>(ci)];
      Lit false_lit = negate(p);
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      // now c[1] == false_lit
      if (value_lit(c[0]) == 1) {
        ws[j++] = ws[i++];
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.size(); ++k) {
        if (value_lit(c[k]) != 0) {
          std::swap(c[1], c[k]);
          watches_[static_cast<size_t>(negate(c[1]))].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) {
        ++i; // removed from this watch list
        continue;
      }
      // clause is unit or conflicting
      ws[j++] = ws[i++];
      if (value_lit(c[0]) == 0) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return ci;
      }
      enqueue(c[0], ci);
    }
    ws.resize(j);
  }
  return -1;
}

void Solver::analyze(int confl, std::vector<Lit>& learnt, int& backtrack_level) {
  learnt.clear();
  learnt.push_back(0); // slot for the asserting literal
  int counter = 0;
  Lit p = -1;
  int index = static_cast<int>(trail_.size()) - 1;
  int current_level = static_cast<int>(trail_lim_.size());

  for (;;) {
    const std::vector<Lit>& c = clauses_[static_cast<size_t>(confl)];
    for (size_t k = 0; k < c.size(); ++k) {
      Lit q = c[k];
      if (p != -1 && q == p) continue;
      int v = lit_var(q);
      if (!seen_[static_cast<size_t>(v)] && levels_[static_cast<size_t>(v)] > 0) {
        seen_[static_cast<size_t>(v)] = true;
        bump(v);
        if (levels_[static_cast<size_t>(v)] >= current_level) {
          ++counter;
        } else {
          learnt.push_back(q);
        }
      }
    }
    while (!seen_[static_cast<size_t>(lit_var(trail_[static_cast<size_t>(index)]))]) --index;
    p = trail_[static_cast<size_t>(index)];
    --index;
    seen_[static_cast<size_t>(lit_var(p))] = false;
    --counter;
    if (counter == 0) break;
    confl = reasons_[static_cast<size_t>(lit_var(p))];
  }
  learnt[0] = negate(p);

  backtrack_level = 0;
  for (size_t k = 1; k < learnt.size(); ++k) {
    backtrack_level = std::max(backtrack_level, levels_[static_cast<size_t>(lit_var(learnt[k]))]);
  }
  // move a literal of the backtrack level into watch position 1
  if (learnt.size() > 1) {
    size_t best = 1;
    for (size_t k = 2; k < learnt.size(); ++k) {
      if (levels_[static_cast<size_t>(lit_var(learnt[k]))] >
          levels_[static_cast<size_t>(lit_var(learnt[best]))]) {
        best = k;
      }
    }
    std::swap(learnt[1], learnt[best]);
  }
  for (size_t k = 0; k < learnt.size(); ++k) seen_[static_cast<size_t>(lit_var(learnt[k]))] = false;
}

void Solver::backtrack(int level) {
  if (static_cast<int>(trail_lim_.size()) <= level) return;
  size_t bound = static_cast<size_t>(trail_lim_[static_cast<size_t>(level)]);
  for (size_t i = trail_.size(); i-- > bound;) {
    int v = lit_var(trail_[i]);
    phase_[static_cast<size_t>(v)] = assigns_[static_cast<size_t>(v)] == 1;
    assigns_[static_cast<size_t>(v)] = -1;
    reasons_[static_cast<size_t>(v)] = -1;
  }
  trail_.resize(bound);
  trail_lim_.resize(static_cast<size_t>(level));
  qhead_ = trail_.size();
}

int Solver::pick_branch_var() {
  int best = -1;
  double best_activity = -1.0;
  for (int v = 0; v < num_vars(); ++v) {
    if (assigns_[static_cast<size_t>(v)] < 0 && activity_[static_cast<size_t>(v)] > best_activity) {
      best = v;
      best_activity = activity_[static_cast<size_t>(v)];
    }
  }
  return best;
}

void Solver::bump(int v) {
  activity_[static_cast<size_t>(v)] += var_inc_;
  if (activity_[static_cast<size_t>(v)] > kActivityLimit) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
}

void Solver::decay() {
  var_inc_ *= kVarDecay;
}

Solver::Result Solver::solve(std::int64_t conflict_budget) {
  if (!ok_) return Result::Unsat;

  std::int64_t conflicts = 0;
  std::int64_t restarts = 0;
  std::int64_t restart_limit = kRestartBase * luby(restarts);
  std::int64_t conflicts_since_restart = 0;

  for (;;) {
    int confl = propagate();
    if (confl != -1) {
      ++conflicts;
      ++total_conflicts_;
      ++conflicts_since_restart;
      if (trail_lim_.empty()) {
        ok_ = false;
        return Result::Unsat;
      }
      if (conflict_budget >= 0 && conflicts > conflict_budget) {
        backtrack(0);
        return Result::BudgetExceeded;
      }
      std::vector<Lit> learnt;
      int level = 0;
      analyze(confl, learnt, level);
      backtrack(level);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        int ci = attach_clause(std::move(learnt));
        enqueue(clauses_[static_cast<size_t>(ci)][0], ci);
      }
      decay();
      continue;
    }

    if (conflicts_since_restart >= restart_limit) {
      conflicts_since_restart = 0;
      restart_limit = kRestartBase * luby(++restarts);
      backtrack(0);
      continue;
    }

    int v = pick_branch_var();
    if (v < 0) {
      // full model
      model_.assign(static_cast<size_t>(num_vars()) + 1, false);
      for (int w = 0; w < num_vars(); ++w) {
        model_[static_cast<size_t>(w) + 1] = assigns_[static_cast<size_t>(w)] == 1;
      }
      backtrack(0);
      return Result::Sat;
    }
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(phase_[static_cast<size_t>(v)] ? static_cast<Lit>(2 * v)
                                           : static_cast<Lit>(2 * v + 1),
            -1);
  }
}

bool Solver::model_satisfies_clauses() const {
  for (size_t ci = 0; ci < original_clause_count_; ++ci) {
    bool sat = false;
    for (Lit l : clauses_[ci]) {
      bool val = model_[static_cast<size_t>(lit_var(l)) + 1];
      if (lit_sign(l) ? !val : val) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

} // namespace fairflow::engine
