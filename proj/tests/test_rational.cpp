#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "ricfb/rational.hpp"
#include "ricfb/seeded_rng.hpp"

using ricfb::Rational;

TEST_CASE("construction reduces to lowest terms with positive denominator") {
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(-6, 4).num() == -3);
  CHECK(Rational(6, -4).num() == -3);
  CHECK(Rational(6, -4).den() == 2);
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0, 7).den() == 1);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("arithmetic is exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(3, 2) * Rational(2, 3) == Rational(1));
  CHECK(Rational(7, 2) - Rational(3) == Rational(1, 2));
  CHECK(Rational(1, 3) / Rational(2, 3) == Rational(1, 2));
  CHECK(Rational(5, 2) > Rational(2));
  CHECK(Rational(-1, 2) < Rational(0));
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("render and parse round-trip") {
  CHECK(Rational(3, 2).str() == "3/2");
  CHECK(Rational(-4).str() == "-4");
  CHECK(Rational::parse("3/2") == Rational(3, 2));
  CHECK(Rational::parse("-7") == Rational(-7));
  CHECK(Rational::parse("-9/6") == Rational(-3, 2));
}

TEST_CASE("overflow is detected, never wrapped") {
  Rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
  CHECK_NOTHROW(big + big);  // fits exactly at INT64_MAX - 1
}

TEST_CASE("random sums stay reduced") {
  ricfb::SeededRng rng(99);
  std::uint64_t c = 0;
  for (int trial = 0; trial < 500; ++trial) {
    auto draw = [&]() {
      long long n = static_cast<long long>(rng.uniform(c++) * 41) - 20;
      long long d = 1 + static_cast<long long>(rng.uniform(c++) * 20);
      return Rational(n, d);
    };
    Rational a = draw(), b = draw();
    for (Rational r : {a + b, a - b, a * b}) {
      CHECK(r.den() > 0);
      CHECK(std::gcd(r.num(), r.den()) == 1);
    }
  }
}
