#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/diag.hpp"
#include "core/rational.hpp"

using fairflow::Rational;

TEST_CASE("parsing accepts fractions, decimals and integers") {
  CHECK(Rational::parse("3/10") == Rational(3, 10));
  CHECK(Rational::parse("0.3") == Rational(3, 10));
  CHECK(Rational::parse("0.25") == Rational(1, 4));
  CHECK(Rational::parse("-7/14") == Rational(-1, 2));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse(" 2/4 ") == Rational(1, 2));
  CHECK_THROWS_AS(Rational::parse("1/0"), fairflow::AnalysisError);
  CHECK_THROWS_AS(Rational::parse("x"), fairflow::AnalysisError);
  CHECK_THROWS_AS(Rational::parse(""), fairflow::AnalysisError);
}

TEST_CASE("values are kept in lowest terms with positive denominator") {
  Rational r(-6, -8);
  CHECK(r.numerator() == "3");
  CHECK(r.denominator() == "4");
  CHECK(Rational(2, 4).to_string() == "1/2");
  CHECK(Rational(8, 4).to_string() == "2");
  CHECK((Rational(112, 490)).to_string() == "8/35");
}

TEST_CASE("arithmetic is exact") {
  Rational third(1, 3), sixth(1, 6);
  CHECK(third + sixth == Rational(1, 2));
  CHECK(third - sixth == sixth);
  CHECK(third * Rational(3) == Rational(1));
  CHECK(Rational(1) / Rational(3) == third);
  CHECK_THROWS_AS(third / Rational(0), fairflow::AnalysisError);
  CHECK(-third + third == Rational(0));
}

TEST_CASE("decimal rendering rounds half to even") {
  CHECK(Rational(112, 490).to_decimal(2) == "0.23");
  CHECK(Rational(131, 490).to_decimal(2) == "0.27");
  CHECK(Rational(67, 350).to_decimal(2) == "0.19");
  CHECK(Rational(37, 101).to_decimal(2) == "0.37");
  CHECK(Rational(1, 8).to_decimal(2) == "0.12");  // 0.125 ties to even
  CHECK(Rational(3, 8).to_decimal(2) == "0.38");  // 0.375 ties to even
  CHECK(Rational(3, 25).to_decimal(6) == "0.120000");
  CHECK(Rational(-1, 8).to_decimal(2) == "-0.12");
  CHECK(Rational(0).to_decimal(6) == "0.000000");
  CHECK(Rational(1).to_decimal(2) == "1.00");
}

TEST_CASE("sums of random rationals match a common-denominator recomputation") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> num(-40, 40), den(1, 24);
  for (int round = 0; round < 50; ++round) {
    std::vector<std::pair<std::int64_t, std::int64_t>> parts;
    Rational sum(0);
    std::int64_t common = 1;
    for (int i = 0; i < 12; ++i) {
      std::int64_t n = num(rng), d = den(rng);
      parts.emplace_back(n, d);
      sum += Rational(n, d);
      common *= d;
    }
    std::int64_t scaled = 0;
    for (auto [n, d] : parts) scaled += n * (common / d);
    CHECK(sum == Rational(scaled, common));
  }
}
