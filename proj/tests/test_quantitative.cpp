#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/qualitative.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "support/program_gen.hpp"

using namespace fairflow;
using fftest::corpus_path;
using fftest::corpus_program;
using fftest::corpus_space;
using fftest::inline_program;
namespace oracle = fftest::oracle;

namespace {

CptDocument corpus_cpt(const std::string& name) {
  return cpt_from_json(Json::parse(read_file(corpus_path(name))));
}

} // namespace

TEST_CASE("password checker vulnerability is 2/3 on both routes") {
  CptDocument cpt = corpus_cpt("password_cpt.json");
  CHECK(conditional_vulnerability(cpt.table, cpt.dist_g, cpt.dist_u).exact == Rational(2, 3));

  MetricValue program_route =
      conditional_vulnerability(corpus_program("password.dp"), corpus_space("password_space.json"));
  CHECK(program_route.exact == Rational(2, 3));

  // frozen against the defining sum
  Rational expected = oracle::vulnerability(oracle::password, oracle::range(1, 3),
                                            oracle::range(1, 3), oracle::uniform_weights(3),
                                            oracle::uniform_weights(3));
  CHECK(expected == Rational(2, 3));
}

TEST_CASE("a dominant group pins V regardless of the minority row") {
  // Pr[G=1] = 49/50; every row for g=1 with min_d mass >= 1/49 forces V = 49/50
  std::vector<Rational> g_dist = {Rational(1, 50), Rational(49, 50)};
  std::vector<Rational> u_dist = {Rational(1)};
  for (const char* minority : {"0", "1/2", "1"}) {
    for (const char* majority : {"1/2", "1/49", "47/49"}) {
      OutcomeTable table({0, 1}, {{0}}, {0, 1});
      Rational p1 = Rational::parse(majority);
      Rational p0 = Rational::parse(minority);
      table.set_prob(0, 0, 0, Rational(1) - p0);
      table.set_prob(0, 0, 1, p0);
      table.set_prob(1, 0, 0, Rational(1) - p1);
      table.set_prob(1, 0, 1, p1);
      CHECK(conditional_vulnerability(table, g_dist, u_dist).exact == Rational(49, 50));
    }
  }
}

TEST_CASE("equal vulnerability can hide very different spreads") {
  CptDocument a = corpus_cpt("skewed_groups_cpt_a.json");
  CptDocument b = corpus_cpt("skewed_groups_cpt_b.json");
  MetricValue va = conditional_vulnerability(a.table, a.dist_g, a.dist_u);
  MetricValue vb = conditional_vulnerability(b.table, b.dist_g, b.dist_u);
  CHECK(va.exact == Rational(49, 50));
  CHECK(va.exact == vb.exact);
  SpreadResult sa = fairness_spread(a.table, a.dist_u);
  SpreadResult sb = fairness_spread(b.table, b.dist_u);
  CHECK(sa.value.exact == Rational(1, 2));
  CHECK(sb.value.exact == Rational(0));
}

TEST_CASE("a constant program has V = 1/n and zero spread") {
  auto constant = inline_program(
      "program const_one(group : [0, 9], score : [1, 10]) { return 1; }");
  InputSpace space = corpus_space("uniform_scores.json");
  CHECK(conditional_vulnerability(constant, space).exact == Rational(1, 10));
  CHECK(fairness_spread(constant, space).value.exact == Rational(0));
  CHECK(fairness_spread_via_vulnerability(constant, space).exact == Rational(0));
}

TEST_CASE("the uniform score setting reproduces the published metrics") {
  InputSpace space = corpus_space("uniform_scores.json");
  struct Row {
    const char* name;
    oracle::ProgramFn fn;
    Rational v, s;
  };
  std::vector<Row> rows = {{"c1.dp", oracle::c1, Rational(1, 5), Rational(1)},
                           {"c2.dp", oracle::c2, Rational(1, 10), Rational(0)},
                           {"c3.dp", oracle::c3, Rational(3, 25), Rational(1, 5)}};
  for (const auto& row : rows) {
    auto p = corpus_program(row.name);
    MetricValue v = conditional_vulnerability(p, space);
    SpreadResult s = fairness_spread(p, space);
    CHECK(v.exact == row.v);
    CHECK(s.value.exact == row.s);
    // and the independent recomputation agrees
    CHECK(oracle::vulnerability(row.fn, oracle::range(0, 9), oracle::range(1, 10),
                                oracle::uniform_weights(10), oracle::uniform_weights(10)) ==
          row.v);
    CHECK(oracle::spread(row.fn, oracle::range(0, 9), oracle::range(1, 10),
                         oracle::uniform_weights(10)) == row.s);
  }
}

TEST_CASE("credit program spread at T=3 is 3/5") {
  auto p = corpus_program("credit.dp", {{"T", 3}});
  InputSpace space = corpus_space("credit_space.json");
  Rational expected = oracle::spread(oracle::credit(3), {0, 1}, oracle::range(1, 10),
                                     oracle::uniform_weights(10));
  CHECK(expected == Rational(3, 5));
  CHECK(fairness_spread(p, space).value.exact == expected);
}

TEST_CASE("spread equals |G|*V - 1 on corpus and random programs") {
  InputSpace uniform = corpus_space("uniform_scores.json");
  for (const char* name : {"c1.dp", "c2.dp", "c3.dp", "c3_group8.dp"}) {
    auto p = corpus_program(name);
    CHECK(fairness_spread(p, uniform).value.exact ==
          fairness_spread_via_vulnerability(p, uniform).exact);
  }
  fftest::ProgramGenerator gen(131);
  for (int i = 0; i < 80; ++i) {
    auto sample = gen.next(true, true);
    CHECK(fairness_spread(sample.program, sample.space).value.exact ==
          fairness_spread_via_vulnerability(sample.program, sample.space).exact);
  }
}

TEST_CASE("spread never depends on the protected distribution") {
  std::vector<Distribution> g_dists = {
      Distribution::uniform(),
      Distribution::pmf({{0, Rational(1, 2)}, {1, Rational(1, 18)}, {2, Rational(1, 18)},
                         {3, Rational(1, 18)}, {4, Rational(1, 18)}, {5, Rational(1, 18)},
                         {6, Rational(1, 18)}, {7, Rational(1, 18)}, {8, Rational(1, 18)},
                         {9, Rational(1, 18)}}),
      Distribution::pmf({{0, Rational(1, 100)}, {1, Rational(1, 100)}, {2, Rational(1, 100)},
                         {3, Rational(1, 100)}, {4, Rational(1, 100)}, {5, Rational(1, 100)},
                         {6, Rational(1, 100)}, {7, Rational(1, 100)}, {8, Rational(1, 100)},
                         {9, Rational(91, 100)}})};
  for (const char* name : {"c1.dp", "c2.dp", "c3.dp", "c3_group8.dp"}) {
    auto p = corpus_program(name);
    std::vector<Rational> values;
    for (const auto& dist : g_dists) {
      InputSpace space = corpus_space("uniform_scores.json");
      space.protected_input.dist = dist;
      space.validate();
      values.push_back(fairness_spread(p, space).value.exact);
      // the identity route fixes G to uniform internally, so it agrees too
      CHECK(fairness_spread_via_vulnerability(p, space).exact == values.back());
    }
    CHECK(values[0] == values[1]);
    CHECK(values[0] == values[2]);
  }
}

TEST_CASE("native weighted spread equals the wrapped uniform spread") {
  InputSpace skewed = corpus_space("skewed_scores.json");
  auto p = corpus_program("c3.dp");
  SpreadResult native = fairness_spread(p, skewed);
  CHECK(native.value.exact == Rational(3, 10));

  UniformWrapResult wrapped = wrap_to_uniform(p, skewed);
  SpreadResult uniform = fairness_spread(wrapped.program, wrapped.space);
  CHECK(uniform.value.exact == native.value.exact);
  CHECK(conditional_vulnerability(wrapped.program, wrapped.space).exact == Rational(13, 100));

  fftest::ProgramGenerator gen(211);
  for (int i = 0; i < 25; ++i) {
    auto sample = gen.next(true, true);
    UniformWrapResult w = wrap_to_uniform(sample.program, sample.space);
    CHECK(fairness_spread(sample.program, sample.space).value.exact ==
          fairness_spread(w.program, w.space).value.exact);
  }
}

TEST_CASE("spread stays within [0,1] and vanishes exactly when parity needs it to") {
  fftest::ProgramGenerator gen(307);
  for (int i = 0; i < 60; ++i) {
    auto sample = gen.next(true, true);
    SpreadResult s = fairness_spread(sample.program, sample.space);
    CHECK(s.value.exact >= Rational(0));
    CHECK(s.value.exact <= Rational(1));
    if (s.value.exact.is_zero()) {
      CHECK(demographic_parity(sample.program, sample.space).holds);
    }
    if (check_unconditional_ni(sample.program, sample.space).holds) {
      CHECK(s.value.exact.is_zero());
    }
  }
}

TEST_CASE("non-binary outcomes are refused") {
  auto p = inline_program(
      "program tri(group : [0, 9], score : [1, 10]) {\n"
      "  if (score >= 8) { return 2; }\n"
      "  if (score >= 6) { return 1; }\n"
      "  return 0;\n"
      "}");
  InputSpace space = corpus_space("uniform_scores.json");
  try {
    fairness_spread(p, space);
    FAIL("expected NonBinaryOutcome");
  } catch (const AnalysisError& e) {
    CHECK(e.code() == ErrorCode::NonBinaryOutcome);
  }
  CHECK_THROWS_AS(fairness_spread_via_vulnerability(p, space), AnalysisError);
  // vulnerability itself is fine with three outcomes
  CHECK(conditional_vulnerability(p, space).exact > Rational(0));
}

TEST_CASE("favorable-outcome override changes which gap is measured") {
  // with outcomes {0,1}, measuring 0 as favorable yields the same gap
  auto p = corpus_program("c3.dp");
  InputSpace space = corpus_space("uniform_scores.json");
  CHECK(fairness_spread(p, space, 0).value.exact == fairness_spread(p, space, 1).value.exact);
  try {
    fairness_spread(p, space, 7);
    FAIL("expected NonBinaryOutcome for a favorable value outside the domain");
  } catch (const AnalysisError& e) {
    CHECK(e.code() == ErrorCode::NonBinaryOutcome);
  }
}

TEST_CASE("incomplete tables are rejected") {
  OutcomeTable table({0, 1}, {{0}}, {0, 1});
  table.set_prob(0, 0, 0, Rational(1));
  // row for g=1 missing
  CHECK_THROWS_AS(
      conditional_vulnerability(table, {Rational(1, 2), Rational(1, 2)}, {Rational(1)}),
      AnalysisError);
  OutcomeTable bad_sum({0}, {{0}}, {0, 1});
  bad_sum.set_prob(0, 0, 0, Rational(1, 2));
  bad_sum.set_prob(0, 0, 1, Rational(1, 4));
  CHECK_THROWS_AS(conditional_vulnerability(bad_sum, {Rational(1)}, {Rational(1)}),
                  AnalysisError);
}

TEST_CASE("per-u spread terms explain the total") {
  auto p = corpus_program("c3.dp");
  InputSpace space = corpus_space("uniform_scores.json");
  SpreadResult s = fairness_spread(p, space);
  REQUIRE(s.per_u.size() == 10);
  Rational total(0);
  for (size_t i = 0; i < s.per_u.size(); ++i) {
    CHECK((s.per_u[i] == Rational(0) || s.per_u[i] == Rational(1)));
    total += s.per_u[i] * Rational(1, 10);
  }
  CHECK(total == s.value.exact);
  CHECK(s.per_u[5] == Rational(1)); // scores 6 and 7 split the groups
  CHECK(s.per_u[6] == Rational(1));
}
