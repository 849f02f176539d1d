#pragma once

// Seeded generator of random loop-free decision programs plus matching input
// spaces, used for property-based and differential testing.

#include <random>
#include <string>

#include "core/space.hpp"

namespace fftest {

struct GeneratedCase {
  fairflow::dsl::ValidatedProgram program;
  fairflow::InputSpace space;
};

class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint64_t seed) : rng_(seed) {}

  // boolean_returns forces every return to be a comparison (|D| <= 2).
  GeneratedCase next(bool boolean_returns, bool allow_pmf) {
    using namespace fairflow;
    using namespace fairflow::dsl;
    for (;;) {
      std::int64_t g_size = pick(2, 6);
      int u_count = static_cast<int>(pick(1, 2));

      InputSpace space;
      Domain g_dom = Domain::interval(0, g_size - 1);
      space.protected_input = SpaceComponent{"g", g_dom, random_dist(g_dom, allow_pmf)};
      std::vector<Param> params;
      params.push_back(Param{"g", space.protected_input.domain, {}});
      for (int i = 0; i < u_count; ++i) {
        std::int64_t lo = pick(-3, 2);
        std::int64_t hi = lo + pick(1, 6);
        std::string name = "u" + std::to_string(i);
        Domain dom = Domain::interval(lo, hi);
        space.unprotected.push_back(SpaceComponent{name, dom, random_dist(dom, allow_pmf)});
        params.push_back(Param{name, dom, {}});
      }

      DecisionProgram program;
      program.name = "gen";
      program.params = params;
      vars_.clear();
      for (const auto& p : params) vars_.push_back(p.name);
      int locals = static_cast<int>(pick(0, 2));
      for (int i = 0; i < locals; ++i) {
        std::string name = "t" + std::to_string(i);
        auto stmt = std::make_unique<Stmt>();
        stmt->node = Stmt::Assign{name, random_arith(2), true, -1};
        program.body.push_back(std::move(stmt));
        vars_.push_back(name);
      }
      emit_tree(program.body, static_cast<int>(pick(0, 2)), boolean_returns);

      try {
        GeneratedCase out{typecheck(program), std::move(space)};
        return out;
      } catch (const AnalysisError&) {
        continue; // overflow-rejected draw; try again
      }
    }
  }

 private:
  std::int64_t pick(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  fairflow::Distribution random_dist(const fairflow::Domain& dom, bool allow_pmf) {
    using fairflow::Rational;
    if (!allow_pmf || pick(0, 1) == 0) return fairflow::Distribution::uniform();
    // random full-support pmf with small integer weights
    std::vector<std::int64_t> weights;
    std::int64_t total = 0;
    for (std::int64_t i = 0; i < dom.size(); ++i) {
      weights.push_back(pick(1, 5));
      total += weights.back();
    }
    std::map<std::int64_t, Rational> masses;
    for (std::int64_t i = 0; i < dom.size(); ++i) {
      masses[dom.value_at(i)] = Rational::from_int64(weights[static_cast<size_t>(i)]) /
                                Rational::from_int64(total);
    }
    return fairflow::Distribution::pmf(std::move(masses));
  }

  fairflow::dsl::ExprPtr random_arith(int depth) {
    using namespace fairflow::dsl;
    if (depth == 0 || pick(0, 2) == 0) {
      if (!vars_.empty() && pick(0, 2) > 0) {
        return make_var(vars_[static_cast<size_t>(pick(0, static_cast<std::int64_t>(vars_.size()) - 1))]);
      }
      return make_int(pick(-4, 4));
    }
    switch (pick(0, 3)) {
      case 0:
        return make_binary(BinOp::Add, random_arith(depth - 1), random_arith(depth - 1));
      case 1:
        return make_binary(BinOp::Sub, random_arith(depth - 1), random_arith(depth - 1));
      case 2:
        return make_binary(BinOp::Mul, make_int(pick(-3, 3)), random_arith(depth - 1));
      default:
        return make_cond(random_cmp(), random_arith(depth - 1), random_arith(depth - 1));
    }
  }

  fairflow::dsl::ExprPtr random_cmp() {
    using namespace fairflow::dsl;
    static const BinOp ops[] = {BinOp::Eq, BinOp::Ne, BinOp::Lt,
                                BinOp::Le, BinOp::Gt, BinOp::Ge};
    return make_binary(ops[pick(0, 5)], random_arith(1), random_arith(1));
  }

  fairflow::dsl::ExprPtr random_return_expr(bool boolean_returns) {
    if (boolean_returns) return random_cmp();
    return pick(0, 1) == 0 ? random_cmp() : random_arith(1);
  }

  void emit_tree(std::vector<fairflow::dsl::StmtPtr>& body, int depth, bool boolean_returns) {
    using namespace fairflow::dsl;
    if (depth == 0) {
      auto ret = std::make_unique<Stmt>();
      ret->node = Stmt::Return{random_return_expr(boolean_returns)};
      body.push_back(std::move(ret));
      return;
    }
    auto iff = std::make_unique<Stmt>();
    Stmt::If node{random_cmp(), {}, {}};
    emit_tree(node.then_body, depth - 1, boolean_returns);
    emit_tree(node.else_body, depth - 1, boolean_returns);
    iff->node = std::move(node);
    body.push_back(std::move(iff));
  }

  std::mt19937_64 rng_;
  std::vector<std::string> vars_;
};

} // namespace fftest
