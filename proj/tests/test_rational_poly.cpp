#include "doctest.h"

#include "osclax/error.hpp"
#include "osclax/poly.hpp"

using namespace osclax;

TEST_CASE("rational canonical form") {
  Rational a(6, -4);
  CHECK(a.str() == "-3/2");
  CHECK(Rational(0, 5).str() == "0");
  CHECK(Rational::parse(" 10/4 ") == Rational(5, 2));
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("rational overflow spills to gmp and comes back") {
  Rational big(1LL << 61);
  Rational p = big * big * big;
  CHECK(p.numerator_str() == "12259964326927110866866776217202473468949912977468817408");
  Rational back = p / (big * big);
  CHECK(back == big);
  Rational q = Rational(1, 3).pow(80) * Rational(3).pow(80);
  CHECK(q.is_one());
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
}

TEST_CASE("factorial and binomial") {
  CHECK(factorial(10) == Rational(3628800));
  CHECK(binomial(10, 3) == Rational(120));
  CHECK(binomial(3, 5).is_zero());
}

TEST_CASE("polynomial arithmetic") {
  auto ring = Ring::make({"z", "x", "y"});
  auto z = MultiPoly::var(ring, "z");
  auto x = MultiPoly::var(ring, "x");
  MultiPoly one(ring, Rational(1));
  auto sq = (z + x) * (z + x);
  CHECK(sq.str() == "1*z^2 + 2*z*x + 1*x^2");
  CHECK((sq - z * z - x * x * Rational(1) - Rational(2) * z * x).is_zero());
  CHECK(sq.degree(0) == 2);
  CHECK(sq.coeff(0, 1) == Rational(2) * x);
  CHECK(sq.subs(1, Rational(-1)) == z * z - Rational(2) * z + one);
  CHECK(sq.subs(0, x) == Rational(4) * x * x);
  CHECK(sq.evaluate({{0, Rational(1, 2)}, {1, Rational(3)}}) == Rational(49, 4));
  CHECK(MultiPoly(ring).str() == "0");
}

TEST_CASE("ring mismatch is rejected") {
  auto r1 = Ring::make({"z"});
  auto r2 = Ring::make({"x"});
  CHECK_THROWS_AS(MultiPoly::var(r1, "z") + MultiPoly::var(r2, "x"), Error);
  CHECK_THROWS_AS(r1->index("q"), Error);
  CHECK_THROWS_AS(Ring::make({"z", "z"}), Error);
}

TEST_CASE("to_ring re-expresses variables") {
  auto r1 = Ring::make({"z", "x"});
  auto r2 = Ring::make({"x", "y", "z"});
  auto p = MultiPoly::var(r1, "z") * MultiPoly::var(r1, "x") + MultiPoly(r1, Rational(3));
  auto q = p.to_ring(r2);
  CHECK(q == MultiPoly::var(r2, "z") * MultiPoly::var(r2, "x") + MultiPoly(r2, Rational(3)));
}

TEST_CASE("rational functions compare by cross multiplication") {
  auto ring = Ring::make({"t"});
  auto t = MultiPoly::var(ring, "t");
  MultiPoly one(ring, Rational(1));
  RationalFunction a(t, one - t);
  RationalFunction b(t * (one + t), (one - t) * (one + t));
  CHECK(a == b);
  auto s = a + RationalFunction(one);
  CHECK(s == RationalFunction(one, one - t));
  CHECK(s.evaluate({{0, Rational(1, 2)}}) == Rational(2));
}
