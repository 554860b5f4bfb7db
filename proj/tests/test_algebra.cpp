#include <cmath>

#include "doctest.h"
#include "osclax/error.hpp"
#include "osclax/fock.hpp"
#include "support.hpp"

using namespace osclax;
using osclax::testing::plain_context;
using osclax::testing::random_element;

namespace {

AlgebraElement ad(const ContextPtr& c, int m, int p = 1) { return AlgebraElement::creation(c, m, p); }
AlgebraElement an(const ContextPtr& c, int m, int q = 1) { return AlgebraElement::annihilation(c, m, q); }
AlgebraElement num(const ContextPtr& c, long long n, long long d = 1) { return AlgebraElement(c, Rational(n, d)); }

int max_creation(const AlgebraElement& e) {
  int d = 0;
  for (const auto& [m, c] : e.terms())
    for (const auto& f : m.factors()) d = std::max(d, f.p);
  return d;
}

}  // namespace

TEST_CASE("wick: defining relation and distinct modes") {
  auto c = plain_context(2);
  CHECK(an(c, 0) * ad(c, 0) == ad(c, 0) * an(c, 0) + num(c, 1));
  auto z = AlgebraElement::variable(c, "z");
  auto x = AlgebraElement::variable(c, "x");
  auto lhs = (z * ad(c, 0)) * (x * an(c, 1));
  CHECK(lhs.size() == 1);
  CHECK(lhs.str() == "1 * z^1 * x^1 * ad[a1]^1 * a[a2]^1");
  CHECK(commutator(an(c, 0), an(c, 1)).is_zero());
  CHECK(commutator(an(c, 0), ad(c, 0)) == num(c, 1));
}

TEST_CASE("wick: a^2 ad^2 matches the Fock oracle") {
  auto c = plain_context(1);
  auto prod = an(c, 0, 2) * ad(c, 0, 2);
  // Frozen from the cutoff-10 matrix product below.
  auto expect = ad(c, 0, 2) * an(c, 0, 2) + num(c, 4) * ad(c, 0) * an(c, 0) + num(c, 2);
  CHECK(prod == expect);
  auto ra = to_truncated_fock(an(c, 0), 10, {});
  auto rad = to_truncated_fock(ad(c, 0), 10, {});
  auto rep = to_truncated_fock(expect, 10, {});
  CHECK(rep.equal_on(ra * ra * rad * rad, 10, 8));
}

TEST_CASE("commutator with the number operator") {
  auto c = plain_context(1);
  auto n = ad(c, 0) * an(c, 0);
  auto res = commutator(n, ad(c, 0));
  CHECK(res == ad(c, 0));
  auto rn = to_truncated_fock(n, 10, {}, {0});
  auto rad = to_truncated_fock(ad(c, 0), 10, {}, {0});
  CHECK(to_truncated_fock(res, 10, {}, {0}).equal_on(rn * rad - rad * rn, 10, 9));
}

TEST_CASE("truncated Fock representation conventions") {
  auto c = plain_context(1);
  auto n = to_truncated_fock(ad(c, 0) * an(c, 0), 2, {});
  for (int k = 0; k <= 2; ++k) CHECK(n.at(k, k) == Rational(k));
  auto a = to_truncated_fock(an(c, 0), 2, {});
  CHECK(a.at(0, 1) == Rational(1));
  CHECK(a.at(1, 2) == Rational(2));
  CHECK(a.at(1, 0).is_zero());
  CHECK_THROWS_AS(to_truncated_fock(an(c, 0, 3), 2, {}), Error);
  auto a2 = an(c, 0, 2), ad2 = ad(c, 0, 2);
  auto lhs = to_truncated_fock(a2 * ad2, 8, {});
  auto ra = to_truncated_fock(an(c, 0), 8, {});
  auto rad = to_truncated_fock(ad(c, 0), 8, {});
  CHECK(lhs.equal_on(ra * ra * rad * rad, 8, 6));
}

TEST_CASE("wick: random products agree with the truncated Fock oracle") {
  auto c = plain_context(3);
  std::mt19937 rng(20261014);
  std::map<int, Rational> eval{{0, Rational(2, 3)}, {1, Rational(-5, 7)}};
  const int cutoff = 10;
  std::vector<int> modes{0, 1, 2};
  int agreed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_element(c, rng, 3, 4);
    auto b = random_element(c, rng, 3, 4);
    auto ab = a * b;
    auto lhs = to_truncated_fock(ab, cutoff, eval, modes);
    auto rhs = to_truncated_fock(a, cutoff, eval, modes) * to_truncated_fock(b, cutoff, eval, modes);
    bool ok = lhs.equal_on(rhs, cutoff, cutoff - max_creation(b));
    CHECK(ok);
    agreed += ok;
  }
  CHECK(agreed == 100);
}

TEST_CASE("wick: associativity and unit") {
  auto c = plain_context(3);
  std::mt19937 rng(7);
  AlgebraElement one = num(c, 1);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_element(c, rng, 3, 3);
    auto b = random_element(c, rng, 3, 3);
    auto d = random_element(c, rng, 3, 3);
    CHECK((a * b) * d == a * (b * d));
    CHECK(a * one == a);
    CHECK(one * a == a);
  }
}

TEST_CASE("context mismatch is rejected") {
  auto c1 = plain_context(2);
  auto c2 = plain_context(3);
  CHECK_THROWS_AS(an(c1, 0) * an(c2, 0), Error);
  try {
    auto r = an(c1, 0) + an(c2, 0);
    (void)r;
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kContextMismatch);
  }
}

TEST_CASE("text grammar round trip") {
  auto c = plain_context(2);
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_element(c, rng, 4, 4);
    CHECK(AlgebraElement::parse(c, a.str()) == a);
  }
  CHECK(AlgebraElement(c).str() == "0");
  auto p = AlgebraElement::parse(c, "-3/2 * z^2 * ad[a1]^1 * a[a2]^2 + 1");
  CHECK(p == num(c, -3, 2) * AlgebraElement::variable(c, "z") * AlgebraElement::variable(c, "z") * ad(c, 0) *
                 an(c, 1, 2) + num(c, 1));
  CHECK_THROWS_AS(AlgebraElement::parse(c, "1 * ad[a7]^1"), Error);
}

TEST_CASE("twisted trace closed forms") {
  auto ring = Ring::make({"t", "z"});
  auto c = AlgebraContext::make(ring, ModeSpace::make({{0, 'a', 1, 0}, {0, 'a', 2, 0}}));
  MultiPoly t = MultiPoly::var(ring, "t");
  MultiPoly one(ring, Rational(1));
  std::map<int, MultiPoly> w{{0, t}};
  CHECK(twisted_trace(num(c, 1), w) == RationalFunction(one, one - t));
  CHECK(twisted_trace(ad(c, 0) * an(c, 0), w) == RationalFunction(t, (one - t) * (one - t)));
  CHECK(twisted_trace(ad(c, 0, 2) * an(c, 0), w).is_zero());
  CHECK_THROWS_AS(twisted_trace(num(c, 1), {{0, one}}), Error);
  try {
    twisted_trace(num(c, 1), {{0, one}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDivergentTrace);
  }
  CHECK_THROWS_AS(twisted_trace(an(c, 1) * ad(c, 1), w), Error);
}

TEST_CASE("twisted trace: linearity, factorization, grading") {
  auto ring = Ring::make({"t1", "t2", "z"});
  auto c = AlgebraContext::make(ring, ModeSpace::make({{0, 'a', 1, 0}, {0, 'a', 2, 0}}));
  MultiPoly t1 = MultiPoly::var(ring, "t1"), t2 = MultiPoly::var(ring, "t2");
  std::map<int, MultiPoly> w1{{0, t1}}, w2{{1, t2}}, w12{{0, t1}, {1, t2}};
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::string> vars{"t1", "t2", "z"};
    auto a = random_element(c, rng, 4, 4, false);
    auto b = random_element(c, rng, 4, 4, false);
    CHECK(twisted_trace(a + b, w12) == twisted_trace(a, w12) + twisted_trace(b, w12));
    // Factorization over disjoint modes.
    AlgebraElement a0(c), b1(c);
    for (const auto& [m, k] : a.terms())
      if (m.powers(1) == std::make_pair(0, 0)) a0.add_term(m, k);
    for (const auto& [m, k] : b.terms())
      if (m.powers(0) == std::make_pair(0, 0)) b1.add_term(m, k);
    CHECK(twisted_trace(a0 * b1, w12) == twisted_trace(a0, w1) * twisted_trace(b1, w2));
  }
  CHECK(twisted_trace(ad(c, 0) * an(c, 1), w12).is_zero());
  CHECK(twisted_trace(ad(c, 0, 2) * an(c, 0) * ad(c, 1) * an(c, 1), w12).is_zero());
}

TEST_CASE("twisted trace agrees with the truncated series at t = 1/2") {
  auto c = plain_context(2);
  const int cutoff = 60;
  Rational w(1, 2);
  // Series oracle: sum_n w^{n1+n2} <n|e|n> over occupations <= cutoff.
  auto series = [&](const AlgebraElement& e) {
    auto rep = to_truncated_fock(e, cutoff, {}, {0, 1});
    Rational sum(0);
    std::vector<Rational> wp(2 * cutoff + 1, Rational(1));
    for (int k = 1; k <= 2 * cutoff; ++k) wp[static_cast<std::size_t>(k)] = wp[static_cast<std::size_t>(k - 1)] * w;
    for (int i = 0; i < rep.dim(); ++i) {
      auto occ = rep.occupation(i);
      Rational d = rep.at(i, i);
      if (!d.is_zero()) sum += d * wp[static_cast<std::size_t>(occ[0] + occ[1])];
    }
    return sum;
  };
  int checked = 0;
  for (int p0 = 0; p0 <= 3; ++p0) {
    for (int p1 = 0; 2 * (p0 + p1) <= 6; ++p1) {
      auto e = ad(c, 0, p0) * an(c, 0, p0) * ad(c, 1, p1) * an(c, 1, p1);
      // Exact closed form for the product of the two single-mode traces.
      MultiPoly closed = twisted_trace_numeric(e, {{0, w}, {1, w}}, false);
      Rational exact = closed.constant_term();
      Rational approx = series(e);
      double rel = std::fabs(((exact - approx) / exact).to_double());
      CHECK(rel < 1e-12);
      ++checked;
    }
  }
  CHECK(checked == 10);
}

TEST_CASE("twisted trace symbolic and numeric paths agree") {
  auto ring = Ring::make({"t1", "t2", "z"});
  auto c = AlgebraContext::make(ring, ModeSpace::make({{0, 'a', 1, 0}, {0, 'a', 2, 0}}));
  std::mt19937 rng(5);
  std::map<int, MultiPoly> sym{{0, MultiPoly::var(ring, "t1")}, {1, MultiPoly::var(ring, "t2")}};
  std::map<int, Rational> at{{0, Rational(1, 3)}, {1, Rational(-2, 5)}};
  for (int trial = 0; trial < 10; ++trial) {
    auto e = random_element(c, rng, 5, 4, false);
    Rational s = twisted_trace(e, sym).evaluate({{0, Rational(1, 3)}, {1, Rational(-2, 5)}});
    CHECK(twisted_trace_numeric(e, at, false).constant_term() == s);
    CHECK(twisted_trace_numeric(e, at, true).constant_term() * trace_normalization(at) == s);
  }
}

TEST_CASE("substitution: identity, homomorphism check, shifts") {
  auto c = plain_context(2);
  std::mt19937 rng(11);
  auto e = random_element(c, rng, 5, 4);
  CHECK(substitute(e, {}) == e);

  SubstitutionRules shift;
  shift.annihilation[0] = an(c, 0) - ad(c, 1);
  shift.annihilation[1] = an(c, 1) - ad(c, 0);
  CHECK_FALSE(find_homomorphism_violation(c, shift).has_value());
  CHECK(substitute(commutator(an(c, 0), ad(c, 0)), shift) == num(c, 1));

  SubstitutionRules bad;
  bad.annihilation[0] = num(c, 2) * an(c, 0);
  try {
    substitute(e, bad);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kNotHomomorphic);
    CHECK(std::string(err.what()).find("a[a1]") != std::string::npos);
  }
}

TEST_CASE("conjugation by a creation bilinear matches the Fock oracle at cutoff 6") {
  auto c = plain_context(2);
  auto y = num(c, -1) * ad(c, 0) * ad(c, 1);
  const int cutoff = 6;
  std::vector<int> modes{0, 1};
  auto ey = to_truncated_fock(y, cutoff, {}, modes).exp_nilpotent();
  auto emy = to_truncated_fock(num(c, -1) * y, cutoff, {}, modes).exp_nilpotent();
  CHECK((ey * emy).equal_on(FockOperator::identity(cutoff, modes), cutoff, cutoff));
  for (int m = 0; m < 2; ++m) {
    auto conj = ad_conjugate(y, an(c, m));
    CHECK(conj == an(c, m) + ad(c, 1 - m));
    auto rep = ey * to_truncated_fock(an(c, m), cutoff, {}, modes) * emy;
    CHECK(to_truncated_fock(conj, cutoff, {}, modes).equal_on(rep, cutoff - 1, cutoff));
  }
}
