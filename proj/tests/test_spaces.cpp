#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "support/program_gen.hpp"

using namespace fairflow;
using fftest::corpus_space;

TEST_CASE("the uniform score setting enumerates 100 points of weight 1/100") {
  InputSpace space = corpus_space("uniform_scores.json");
  int points = 0;
  Rational total(0);
  for_each_point(space, {}, [&](std::int64_t, const UPoint& u) {
    CHECK(u.weight == Rational(1, 100));
    total += u.weight;
    ++points;
  });
  CHECK(points == 100);
  CHECK(total == Rational(1));
}

TEST_CASE("singleton domains yield one point of weight 1") {
  InputSpace space;
  space.protected_input = SpaceComponent{"g", Domain::interval(4, 4), Distribution::uniform()};
  space.unprotected.push_back(SpaceComponent{"u", Domain::interval(-2, -2), Distribution::uniform()});
  int points = 0;
  for_each_point(space, {}, [&](std::int64_t g, const UPoint& u) {
    CHECK(g == 4);
    CHECK(u.values[0] == -2);
    CHECK(u.weight == Rational(1));
    ++points;
  });
  CHECK(points == 1);
}

TEST_CASE("the skewed score pmf reproduces its declared masses") {
  InputSpace space = corpus_space("skewed_scores.json");
  Rational six_seven(0), total(0);
  for_each_u(space, {}, [&](const UPoint& u) {
    if (u.values[0] == 6 || u.values[0] == 7) six_seven += u.weight;
    if (u.values[0] == 1) CHECK(u.weight == Rational(9, 100));
    total += u.weight;
  });
  CHECK(six_seven == Rational(3, 10));
  CHECK(total == Rational(1));
}

TEST_CASE("unprotected marginals follow the product law") {
  InputSpace space = corpus_space("uniform_scores.json");
  std::vector<UPoint> pts = u_points(space);
  CHECK(pts.size() == 10);
  for (const auto& p : pts) CHECK(p.weight == Rational(1, 10));

  InputSpace two;
  two.protected_input = SpaceComponent{"g", Domain::interval(0, 1), Distribution::uniform()};
  two.unprotected.push_back(
      SpaceComponent{"a", Domain::explicit_set({0, 1}), Distribution::uniform()});
  two.unprotected.push_back(
      SpaceComponent{"b", Domain::explicit_set({0, 1}), Distribution::uniform()});
  std::vector<UPoint> four = u_points(two);
  CHECK(four.size() == 4);
  for (const auto& p : four) CHECK(p.weight == Rational(1, 4));

  InputSpace pmf;
  pmf.protected_input = SpaceComponent{"g", Domain::interval(0, 1), Distribution::uniform()};
  pmf.unprotected.push_back(SpaceComponent{
      "u", Domain::explicit_set({0, 1}),
      Distribution::pmf({{0, Rational(1, 3)}, {1, Rational(2, 3)}})});
  std::vector<UPoint> echo = u_points(pmf);
  CHECK(echo[0].weight == Rational(1, 3));
  CHECK(echo[1].weight == Rational(2, 3));
}

TEST_CASE("weights always sum to exactly one (random spaces)") {
  fftest::ProgramGenerator gen(41);
  for (int i = 0; i < 30; ++i) {
    auto sample = gen.next(false, true);
    Rational total(0);
    for_each_point(sample.space, {}, [&](std::int64_t, const UPoint& u) { total += u.weight; });
    CHECK(total == Rational(1));
  }
}

TEST_CASE("enumeration past the configured cap is refused") {
  InputSpace space = corpus_space("uniform_scores.json");
  EnumerationOptions opts;
  opts.space_cap = 50;
  CHECK_THROWS_AS(for_each_point(space, opts, [](std::int64_t, const UPoint&) {}),
                  AnalysisError);
  try {
    for_each_point(space, opts, [](std::int64_t, const UPoint&) {});
  } catch (const AnalysisError& e) {
    CHECK(e.code() == ErrorCode::SpaceTooLarge);
  }
}

TEST_CASE("pmf invariants are enforced") {
  CHECK_THROWS_AS(Distribution::pmf({{0, Rational(1, 2)}}).validate(Domain::interval(0, 1), "u"),
                  AnalysisError); // sums to 1/2
  CHECK_THROWS_AS(
      Distribution::pmf({{5, Rational(1)}}).validate(Domain::interval(0, 1), "u"),
      AnalysisError); // mass outside domain
  CHECK_THROWS_AS(Domain::explicit_set({1, 1}), AnalysisError);
  CHECK_THROWS_AS(Domain::interval(3, 2), AnalysisError);
}

TEST_CASE("wrapping a pmf yields an equivalent uniform selector program") {
  auto p = fftest::corpus_program("c3.dp");
  InputSpace space = corpus_space("skewed_scores.json");

  UniformWrapResult wrapped = wrap_to_uniform(p, space);
  REQUIRE(wrapped.changed);
  REQUIRE(wrapped.wrapped.size() == 1);
  CHECK(wrapped.wrapped[0].original == "score");
  CHECK(wrapped.wrapped[0].size == 100); // lcm of {100, 20, 25}
  CHECK(wrapped.space.u_all_uniform());
  CHECK(wrapped.space.u_point_count() == 100);

  // Every selector value must behave exactly like one score (same decision
  // vector over all groups), and each decision-vector class must appear with
  // multiplicity 100 * (total pmf mass of its scores).
  SpaceBinding wbinding = SpaceBinding::bind(wrapped.program, wrapped.space);
  SpaceBinding obinding = SpaceBinding::bind(p, space);
  auto decision_vector = [](const fairflow::dsl::ValidatedProgram& prog,
                            const SpaceBinding& binding, std::int64_t u) {
    std::vector<std::int64_t> vec, args(2, 0);
    for (std::int64_t g = 0; g <= 9; ++g) {
      binding.fill_args(g, {u}, args);
      vec.push_back(fairflow::dsl::evaluate_ordered(prog, args.data()));
    }
    return vec;
  };

  std::map<std::vector<std::int64_t>, Rational> class_mass;
  for (std::int64_t s = 1; s <= 10; ++s) {
    class_mass[decision_vector(p, obinding, s)] +=
        space.unprotected[0].dist.mass(space.unprotected[0].domain, s);
  }
  std::map<std::vector<std::int64_t>, int> class_hits;
  for (std::int64_t w = 0; w < 100; ++w) {
    std::vector<std::int64_t> vec = decision_vector(wrapped.program, wbinding, w);
    REQUIRE(class_mass.count(vec) == 1); // selector behaves like a real score
    ++class_hits[vec];
  }
  for (const auto& [vec, mass] : class_mass) {
    CHECK(Rational::from_int64(class_hits[vec]) == mass * Rational(100));
  }
}

TEST_CASE("space binding rejects mismatched programs") {
  auto p = fftest::corpus_program("c3.dp");
  InputSpace space = corpus_space("credit_space.json");
  CHECK_THROWS_AS(SpaceBinding::bind(p, space), AnalysisError);
  try {
    SpaceBinding::bind(p, space);
  } catch (const AnalysisError& e) {
    CHECK(e.code() == ErrorCode::DomainMismatch);
  }
}
