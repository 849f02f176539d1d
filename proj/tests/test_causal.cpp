#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/causal.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace fairflow;
using fftest::corpus_model;
using fftest::corpus_program;
using fftest::inline_program;
namespace oracle = fftest::oracle;

namespace {

CausalModel model_from_text(const std::string& text) {
  dsl::SourceProgram src;
  src.text = text;
  src.origin = "<inline>";
  return parse_model(src);
}

} // namespace

TEST_CASE("model files parse into ordered equations") {
  CausalModel m = corpus_model("score_model.scm");
  REQUIRE(m.background.size() == 4);
  CHECK(m.background[2].domain == Domain::interval(-1, 5));
  REQUIRE(m.equations.size() == 4);
  CHECK(m.equations[2].name == "zipCode");
  CHECK(m.protected_name == "group");
}

TEST_CASE("model parsing rejects malformed declarations") {
  auto code_of = [](const std::string& text) {
    try {
      model_from_text(text);
    } catch (const AnalysisError& e) {
      return e.code();
    }
    return ErrorCode::Ok;
  };
  CHECK(code_of("bg B : [0,1] ~ uniform\nlet x = B\nlet x = B\n") ==
        ErrorCode::DuplicateDefinition);
  CHECK(code_of("bg B : [0,1] ~ uniform\nlet x = y\n") == ErrorCode::UnboundVariable);
  CHECK(code_of("bg B : [0,1] ~ uniform\nlet x = z_later\nlet z_later = B\n") ==
        ErrorCode::UnboundVariable); // forward references break acyclicity
  CHECK(code_of("let x = 1\n") == ErrorCode::Config); // no background variables
  CHECK(code_of("bg B : [0,1] ~ uniform\nprotected B\n") ==
        ErrorCode::Config); // protected must be an equation
  CHECK(code_of("bg B : [0,1] ~ pmf { 0 : 1/3, 1 : 1/3 }\nlet g = B\nprotected g\n") ==
        ErrorCode::Config); // pmf sums to 2/3
}

TEST_CASE("composition computes the documented hand evaluation") {
  auto c2 = corpus_program("c2.dp");
  CausalModel m = corpus_model("score_model.scm");
  ComposedProgram composed = ComposedProgram::compose(c2, m);
  // B1=7 selects the B3 zip branch: score = 5 + 3 = 8 -> accept
  CHECK(composed.evaluate({7, 5, 3, 0}) == 1);
  CHECK(composed.evaluate({5, 5, 3, 0}) == 0); // factual zip branch is B4 = 0
  CHECK(composed.evaluate(dsl::Assignment::of({{"B1", 7}, {"B2", 5}, {"B3", 3}, {"B4", 0}})) == 1);
}

TEST_CASE("an identity model composes to the program itself") {
  auto p = corpus_program("c3.dp");
  CausalModel identity = model_from_text(
      "bg group : [0, 9] ~ uniform\n"
      "bg score : [1, 10] ~ uniform\n");
  ComposedProgram composed = ComposedProgram::compose(p, identity);
  for (std::int64_t g = 0; g <= 9; ++g) {
    for (std::int64_t s = 1; s <= 10; ++s) {
      std::int64_t args[2] = {g, s};
      CHECK(composed.evaluate({g, s}) == dsl::evaluate_ordered(p, args));
    }
  }
}

TEST_CASE("interventions rewire downstream equations") {
  auto c3 = corpus_program("c3.dp");
  CausalModel m = corpus_model("score_model.scm");
  // forcing group to 6 makes zipCode take the B3 branch although B1 = 3
  ComposedProgram at6 = ComposedProgram::compose_intervened(c3, m, 6);
  for (std::int64_t b2 = 0; b2 <= 9; ++b2) {
    for (std::int64_t b3 = -1; b3 <= 5; ++b3) {
      for (std::int64_t b4 = -3; b4 <= 3; ++b4) {
        CHECK(at6.evaluate({3, b2, b3, b4}) == oracle::c3(6, b2 + b3));
      }
    }
  }
  // intervening with the factual group value reproduces plain composition
  ComposedProgram factual = ComposedProgram::compose(c3, m);
  for (std::int64_t g = 0; g <= 9; ++g) {
    ComposedProgram pinned = ComposedProgram::compose_intervened(c3, m, g);
    for (std::int64_t b2 = 0; b2 <= 9; b2 += 3) {
      for (std::int64_t b3 = -1; b3 <= 5; b3 += 2) {
        for (std::int64_t b4 = -3; b4 <= 3; b4 += 2) {
          CHECK(pinned.evaluate({g, b2, b3, b4}) == factual.evaluate({g, b2, b3, b4}));
        }
      }
    }
  }
  CHECK_THROWS_AS(ComposedProgram::compose_intervened(c3, m, 42), AnalysisError);
}

TEST_CASE("intervening on the insurance model shifts engine power linearly") {
  auto fair = corpus_program("premium_with_gender.dp");
  CausalModel m = corpus_model("insurance_model.scm");
  CausalFrame frame = build_causal_frame(fair, m);
  CHECK(frame.group_domain == Domain::explicit_set({0, 100}));
  // engine(gender=100) - engine(gender=0) = 300 fixed-point units (3.00)
  auto probe = inline_program(
      "program engine_probe(gender : {0, 100}, engine : [0, 1100]) { return engine; }");
  CausalFrame pframe = build_causal_frame(probe, m);
  std::int64_t lo[3] = {0, 0, 50}, hi[3] = {100, 0, 50};
  CHECK(dsl::evaluate_ordered(pframe.symbolic, hi) -
            dsl::evaluate_ordered(pframe.symbolic, lo) ==
        300);
}

TEST_CASE("background spreads match the independent enumeration") {
  CausalModel m = corpus_model("score_model.scm");
  SpreadResult c3_spread = spread_over_background(corpus_program("c3.dp"), m);
  CHECK(c3_spread.value.exact == Rational(112, 490));
  CHECK(c3_spread.value.exact == oracle::ScoreModelOracle::background_spread(oracle::c3));
  CHECK(c3_spread.value.exact.to_decimal(2) == "0.23");

  SpreadResult c2_spread = spread_over_background(corpus_program("c2.dp"), m);
  CHECK(c2_spread.value.exact == Rational(131, 490));
  CHECK(c2_spread.value.exact == oracle::ScoreModelOracle::background_spread(oracle::c2));
  CHECK(c2_spread.value.exact.to_decimal(2) == "0.27");
}

TEST_CASE("counterfactual fairness verdicts") {
  CausalModel insurance = corpus_model("insurance_model.scm");
  CHECK(check_counterfactual_fairness(corpus_program("premium_with_gender.dp"), insurance).holds);

  Verdict engine_only =
      check_counterfactual_fairness(corpus_program("premium_engine_only.dp"), insurance);
  CHECK_FALSE(engine_only.holds);

  CausalModel scores = corpus_model("score_model.scm");
  Verdict c2_verdict = check_counterfactual_fairness(corpus_program("c2.dp"), scores);
  CHECK_FALSE(c2_verdict.holds);
  REQUIRE(c2_verdict.witness.has_value());
  CHECK(c2_verdict.witness->d1 != c2_verdict.witness->d2);

  // a program blind to every model variable is trivially fair
  auto blind = inline_program("program blind(score : [-3, 18]) { return 1; }");
  CHECK(check_counterfactual_fairness(blind, scores).holds);
}

TEST_CASE("deviating-counterfactual probability obeys the spread bound") {
  CausalModel scores = corpus_model("score_model.scm");
  MetricValue diff_c3 = prob_deviating_counterfactual(corpus_program("c3.dp"), scores);
  CHECK(diff_c3.exact == oracle::ScoreModelOracle::deviation_probability(oracle::c3));
  CHECK(diff_c3.exact > Rational(0));
  CHECK(diff_c3.exact <= Rational(112, 490));

  CausalModel insurance = corpus_model("insurance_model.scm");
  // two groups: the bound is tight
  MetricValue diff_engine =
      prob_deviating_counterfactual(corpus_program("premium_engine_only.dp"), insurance);
  SpreadResult spread_engine =
      spread_over_background(corpus_program("premium_engine_only.dp"), insurance);
  CHECK(diff_engine.exact == spread_engine.value.exact);
  CHECK(diff_engine.exact == Rational(37, 101));

  auto constant = inline_program("program k(score : [-3, 18]) { return 0; }");
  CHECK(prob_deviating_counterfactual(constant, scores).exact == Rational(0));
}

TEST_CASE("fairness coincides with zero spread on every corpus instance") {
  struct Instance {
    const char* program;
    const char* model;
  };
  for (const Instance& inst : {Instance{"c2.dp", "score_model.scm"},
                               Instance{"c3.dp", "score_model.scm"},
                               Instance{"premium_engine_only.dp", "insurance_model.scm"},
                               Instance{"premium_with_gender.dp", "insurance_model.scm"}}) {
    CausalModel m = corpus_model(inst.model);
    auto p = corpus_program(inst.program);
    bool fair = check_counterfactual_fairness(p, m).holds;
    bool zero = spread_over_background(p, m).value.exact.is_zero();
    CHECK(fair == zero);
  }
}

TEST_CASE("path-specific spreads match the clamped enumeration") {
  CausalModel m = corpus_model("score_model.scm");
  SpreadResult c2_ps = path_specific_spread(corpus_program("c2.dp"), m, {"zipCode"});
  CHECK(c2_ps.value.exact == Rational(0));

  SpreadResult c3_ps = path_specific_spread(corpus_program("c3.dp"), m, {"zipCode"});
  CHECK(c3_ps.value.exact == Rational(67, 350));
  CHECK(c3_ps.value.exact == oracle::ScoreModelOracle::path_clamped_spread(oracle::c3));
  CHECK(c3_ps.value.exact.to_decimal(2) == "0.19");

  // clamping a fair path can only remove counterfactual deviations here
  CHECK(c3_ps.value.exact <= spread_over_background(corpus_program("c3.dp"), m).value.exact);

  // clamping nothing reproduces the plain background spread
  SpreadResult unclamped = path_specific_spread(corpus_program("c3.dp"), m, {});
  CHECK(unclamped.value.exact == Rational(112, 490));

  try {
    path_specific_spread(corpus_program("c3.dp"), m, {"group"});
    FAIL("expected ProtectedVariableClamped");
  } catch (const AnalysisError& e) {
    CHECK(e.code() == ErrorCode::ProtectedVariableClamped);
  }
  CHECK_THROWS_AS(path_specific_spread(corpus_program("c3.dp"), m, {"nosuch"}), AnalysisError);
}

TEST_CASE("intervening with the factual value is the identity, for every background point") {
  for (const char* which : {"score_model.scm", "insurance_model.scm"}) {
    CausalModel m = corpus_model(which);
    auto p = corpus_program(std::string(which) == "score_model.scm" ? "c3.dp"
                                                                    : "premium_with_gender.dp");
    CausalFrame frame = build_causal_frame(p, m);
    std::vector<std::int64_t> sym_args(frame.symbolic.program().params.size(), 0);
    for_each_components(frame.symbolic_space.unprotected, {}, [&](const UPoint& b) {
      std::int64_t factual_group = dsl::evaluate_ordered(frame.protected_value, b.values.data());
      for (size_t i = 0; i < b.values.size(); ++i) sym_args[i + 1] = b.values[i];
      sym_args[0] = factual_group;
      CHECK(dsl::evaluate_ordered(frame.symbolic, sym_args.data()) ==
            dsl::evaluate_ordered(frame.factual, b.values.data()));
    });
  }
}

TEST_CASE("per-point deviation indicators ignore the protected marginal") {
  // Reweighting B1 (which only feeds the protected variable) must not change
  // any per-point deviation indicator; the aggregate changes only through the
  // background weights themselves.
  CausalModel m = corpus_model("score_model.scm");
  auto p = corpus_program("c3.dp");
  MetricValue uniform_prob = prob_deviating_counterfactual(p, m);

  CausalModel skewed = m.clone();
  std::map<std::int64_t, Rational> masses;
  for (std::int64_t v = 0; v <= 9; ++v) {
    masses[v] = v == 0 ? Rational(91, 100) : Rational(1, 100);
  }
  skewed.background[0].dist = Distribution::pmf(std::move(masses));
  MetricValue skewed_prob = prob_deviating_counterfactual(p, skewed);

  // oracle: indicator(b2,b3,b4) = [ (b2+b4>=6) != (b2+b3>=8) ], independent of b1
  Rational expect_uniform(0), expect_skewed(0);
  for (std::int64_t b1 = 0; b1 <= 9; ++b1) {
    Rational w1_uniform = Rational(1, 10);
    Rational w1_skewed = b1 == 0 ? Rational(91, 100) : Rational(1, 100);
    for (std::int64_t b2 = 0; b2 <= 9; ++b2) {
      for (std::int64_t b3 = -1; b3 <= 5; ++b3) {
        for (std::int64_t b4 = -3; b4 <= 3; ++b4) {
          bool deviate = (b2 + b4 >= 6) != (b2 + b3 >= 8);
          if (!deviate) continue;
          Rational rest = Rational(1, 10) * Rational(1, 7) * Rational(1, 7);
          expect_uniform += w1_uniform * rest;
          expect_skewed += w1_skewed * rest;
        }
      }
    }
  }
  CHECK(uniform_prob.exact == expect_uniform);
  CHECK(skewed_prob.exact == expect_skewed);
  CHECK(uniform_prob.exact == skewed_prob.exact); // B1 never decides anything here
}

TEST_CASE("exposure mismatches are rejected") {
  CausalModel m = corpus_model("score_model.scm");
  auto p = inline_program("program f(group : [0, 9], wealth : [0, 9]) { return wealth >= 5; }");
  try {
    ComposedProgram::compose(p, m);
    FAIL("expected ExposureMismatch");
  } catch (const AnalysisError& e) {
    CHECK(e.code() == ErrorCode::ExposureMismatch);
  }
}

TEST_CASE("spread over background requires a binary decision") {
  CausalModel m = corpus_model("score_model.scm");
  auto tri = inline_program(
      "program tri(group : [0, 9], score : [1, 10]) {\n"
      "  if (score >= 8) { return 2; }\n"
      "  if (score >= 6) { return 1; }\n"
      "  return 0;\n"
      "}");
  CHECK_THROWS_AS(spread_over_background(tri, m), AnalysisError);
}
