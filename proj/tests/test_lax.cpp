#include "doctest.h"
#include "osclax/error.hpp"
#include "osclax/fock.hpp"
#include "osclax/lax.hpp"

using namespace osclax;

namespace {

LaxSpec spec_of(LaxFamily f, int r) {
  LaxSpec s;
  s.family = f;
  s.rank = r;
  if (f == LaxFamily::kFundFull) s.s = Rational(0);
  return s;
}

MultiPoly zvar(const ContextPtr& c) { return MultiPoly::var(c->ring, "z"); }

std::map<int, int> mode_map_by_name(const ContextPtr& from, const ContextPtr& to,
                                    const std::map<std::string, std::string>& names) {
  std::map<int, int> m;
  for (const auto& [a, b] : names) m[from->modes->index(ModeLabel::parse(a))] = to->modes->index(ModeLabel::parse(b));
  return m;
}

}  // namespace

TEST_CASE("spinor-degenerate at rank 3 is the level-3 D3 matrix after renaming") {
  auto cs = lax_context(spec_of(LaxFamily::kSpinorDegenerate, 3));
  auto cd = lax_context(spec_of(LaxFamily::kD3Level3, 3));
  auto m = mode_map_by_name(cs, cd, {{"s1,-3", "a1"}, {"s2,-3", "a2"}, {"s1,-2", "a3"}});
  auto l = relabel(build_lax(spec_of(LaxFamily::kSpinorDegenerate, 3), cs), cd, m);
  CHECK(l == build_lax(spec_of(LaxFamily::kD3Level3, 3), cd));
  // The other renamings do not work without a further transformation.
  auto swapped = mode_map_by_name(cs, cd, {{"s1,-3", "a2"}, {"s2,-3", "a1"}, {"s1,-2", "a3"}});
  CHECK_FALSE(relabel(build_lax(spec_of(LaxFamily::kSpinorDegenerate, 3), cs), cd, swapped) ==
              build_lax(spec_of(LaxFamily::kD3Level3, 3), cd));
}

TEST_CASE("spinor-degenerate block layout") {
  for (int r = 2; r <= 4; ++r) {
    auto spec = spec_of(LaxFamily::kSpinorDegenerate, r);
    auto c = lax_context(spec);
    auto l = build_lax(spec, c);
    auto b = spinor_blocks(c, r, 0);
    for (int p = 0; p < r; ++p)
      for (int q = 0; q < r; ++q) {
        CHECK(l.at(p, r + q) == b.abar[p][q]);
        CHECK(l.at(r + p, q) == b.a[p][q]);
        CHECK(l.at(r + p, r + q) == AlgebraElement(c, Rational(p == q ? 1 : 0)));
        AlgebraElement tl = p == q ? AlgebraElement(c, zvar(c)) : AlgebraElement(c);
        for (int k = 0; k < r; ++k) tl += b.abar[p][k] * b.a[k][q];
        CHECK(l.at(p, q) == tl);
      }
  }
}

TEST_CASE("Abar and A are antisymmetric") {
  auto c = lax_context(spec_of(LaxFamily::kSpinorDegenerate, 4));
  const int m = 4;
  auto b = spinor_blocks(c, m, 0);
  // Abar[p][q] = Abar_{-(m-p), q+1}; A[p][q] = A_{p+1, -(m-q)}.
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) {
      CHECK(b.abar[m - i][j - 1] == -b.abar[m - j][i - 1]);
      CHECK(b.a[i - 1][m - j] == -b.a[j - 1][m - i]);
    }
  CHECK(b.abar[m - 2][0] == AlgebraElement::creation(c, c->modes->index(ModeLabel::parse("s1,-2"))));
  CHECK(b.a[0][m - 2] == -AlgebraElement::annihilation(c, c->modes->index(ModeLabel::parse("s1,-2"))));
}

TEST_CASE("fund-degenerate corners") {
  for (int r = 2; r <= 4; ++r) {
    auto spec = spec_of(LaxFamily::kFundDegenerate, r);
    auto c = lax_context(spec);
    auto l = build_lax(spec, c);
    int last = 2 * r - 1;
    CHECK(l.at(last, last) == AlgebraElement(c, Rational(1)));
    AlgebraElement pjp(c), wjw(c);
    for (int k : signed_indices(r - 1)) {
      int m1 = c->modes->index({0, 'v', static_cast<std::int16_t>(k), 0});
      int m2 = c->modes->index({0, 'v', static_cast<std::int16_t>(-k), 0});
      pjp += AlgebraElement::creation(c, m1) * AlgebraElement::creation(c, m2);
      wjw += AlgebraElement::annihilation(c, m1) * AlgebraElement::annihilation(c, m2);
    }
    CHECK(l.at(0, last) == pjp * Rational(-1, 2));
    CHECK(l.at(last, 0) == wjw * Rational(-1, 2));
  }
}

TEST_CASE("every family equals the product of its factors") {
  for (auto f : {LaxFamily::kSpinorDegenerate, LaxFamily::kFundDegenerate, LaxFamily::kSpinorFull,
                 LaxFamily::kQuadWithSpinor}) {
    for (int r = 2; r <= 4; ++r) {
      auto spec = spec_of(f, r);
      auto c = lax_context(spec);
      CAPTURE(family_name(f));
      CAPTURE(r);
      CHECK(build_lax(spec, c) == build_lax_factorized(spec, c, zvar(c)));
    }
  }
  // Conjugated variants.
  auto spec = spec_of(LaxFamily::kSpinorFull, 3);
  spec.signs = {1, -1, 1};
  auto c = lax_context(spec);
  CHECK(build_lax(spec, c) == build_lax_factorized(spec, c, zvar(c)));
}

TEST_CASE("quad-with-spinor at s = 0 reduces to fund-degenerate in the vacuum") {
  for (int r = 2; r <= 4; ++r) {
    auto q = spec_of(LaxFamily::kQuadWithSpinor, r);
    q.s = Rational(0);
    auto cq = lax_context(q);
    auto fd = spec_of(LaxFamily::kFundDegenerate, r);
    auto cf = lax_context(fd);
    std::vector<int> inner;
    std::map<int, int> mm;
    for (int id = 0; id < cq->modes->size(); ++id) {
      const auto& l = cq->modes->label(id);
      if (l.family == 's') inner.push_back(id);
      else mm[id] = cf->modes->index(l);
    }
    auto vac = build_lax(q, cq).map_entries([&](const AlgebraElement& e) { return e.vacuum_expectation(inner); });
    CHECK(relabel(vac, cf, mm) == build_lax(fd, cf));
  }
}

TEST_CASE("spectral degree and oscillator counts") {
  for (int r = 2; r <= 5; ++r) {
    auto count = [&](LaxFamily f, std::optional<Rational> s = std::nullopt) {
      auto spec = spec_of(f, r);
      if (s) spec.s = s;
      return static_cast<int>(lax_modes(spec).size());
    };
    CHECK(count(LaxFamily::kSpinorDegenerate) == r * (r - 1) / 2);
    CHECK(count(LaxFamily::kFundDegenerate) == 2 * (r - 1));
    CHECK(count(LaxFamily::kQuadWithSpinor) == (r + 2) * (r - 1) / 2);
    CHECK(count(LaxFamily::kFundFull, Rational(0)) == 2 * (r - 1));
  }
  for (int r = 2; r <= 4; ++r) {
    for (auto f : {LaxFamily::kSpinorDegenerate, LaxFamily::kSpinorFull}) {
      auto spec = spec_of(f, r);
      auto c = lax_context(spec);
      CHECK(build_lax(spec, c).degree(c->ring->index("z")) == 1);
    }
    for (auto f : {LaxFamily::kFundDegenerate, LaxFamily::kQuadWithSpinor}) {
      auto spec = spec_of(f, r);
      auto c = lax_context(spec);
      int z = c->ring->index("z");
      auto l = build_lax(spec, c);
      CHECK(l.degree(z) == 2);
      auto top = l.coeff(z, 2);
      REQUIRE(top.entries().size() == 1);
      CHECK(top.entries().begin()->first == std::make_pair(0, 0));
    }
    auto ff = spec_of(LaxFamily::kFundFull, r);
    auto c = lax_context(ff);
    CHECK(build_lax(ff, c).coeff(c->ring->index("z"), 2) == OpMatrix::identity(c, {r}));
  }
  auto d2 = spec_of(LaxFamily::kD3Level2, 3);
  auto c = lax_context(d2);
  auto l = build_lax(d2, c);
  CHECK(l.degree(c->ring->index("z")) == 2);
  CHECK(l.coeff(c->ring->index("z"), 2).entries().size() == 1);
}

TEST_CASE("spinor-full weight action on the vacuum") {
  const int r = 3;
  auto spec = spec_of(LaxFamily::kSpinorFull, r);
  auto c = lax_context(spec);
  auto g = extract_generators(build_lax(spec, c), c->ring->index("z"));
  int s = c->ring->index("s");
  std::vector<int> modes;
  for (int id = 0; id < c->modes->size(); ++id) modes.push_back(id);
  const Rational s_val(3, 2);
  FockOperator vac(2, modes);
  vac.add(0, 0, Rational(1));
  for (int a : signed_indices(r))
    for (int b : signed_indices(r)) {
      if (signed_to_pos(a, r) > signed_to_pos(b, r)) continue;
      auto op = to_truncated_fock(g.get(a, b), 2, {{s, s_val}}, modes) * vac;
      FockOperator expect(2, modes);
      if (a == b) expect.add(0, 0, a > 0 ? -s_val : s_val);
      CAPTURE(a);
      CAPTURE(b);
      CHECK(op.equal_on(expect, 2, 0));
    }
}

TEST_CASE("G matrices are unipotent with G G' = I") {
  for (int r = 2; r <= 4; ++r) {
    auto c = make_context({spinor_modes(r, 2), vector_modes(r, 2)});
    std::vector<int> all;
    for (int id = 0; id < c->modes->size(); ++id) all.push_back(id);
    for (auto kind : {GKind::kSpinor, GKind::kQuad, GKind::kFund}) {
      auto g = build_G(kind, c, r);
      CHECK(g * prime_transpose(g) == OpMatrix::identity(c, {r}));
      auto vac = g.map_entries([&](const AlgebraElement& e) { return e.vacuum_expectation(all); });
      CHECK(vac == OpMatrix::identity(c, {r}));
      // Rank-1 inner block of quad-G is empty at r = 2.
      if (!(kind == GKind::kQuad && r == 2)) CHECK_FALSE(g == OpMatrix::identity(c, {r}));
    }
  }
  auto c = make_context({spinor_modes(3, 2)});
  auto g = build_G(GKind::kSpinor, c, 3);
  auto A = spinor_blocks(c, 3, 2).a;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) CHECK(g.at(p, 3 + q) == -A[q][p]);
}

TEST_CASE("twists") {
  auto c = lax_context(spec_of(LaxFamily::kSpinorDegenerate, 2));
  auto d = build_twist_D(c, {Rational(2), Rational(3)});
  OpMatrix expect(c, {2});
  expect.set(0, 0, AlgebraElement(c, Rational(1, 3)));
  expect.set(1, 1, AlgebraElement(c, Rational(1, 2)));
  expect.set(2, 2, AlgebraElement(c, Rational(2)));
  expect.set(3, 3, AlgebraElement(c, Rational(3)));
  CHECK(d == expect);
  CHECK(d * prime_transpose(d) == OpMatrix::identity(c, {2}));
  for (int r = 2; r <= 5; ++r) {
    auto ch = fundamental_twist_charges(r);
    for (int a : signed_indices(r)) {
      Charge sum = ch[signed_to_pos(a, r)];
      sum += ch[signed_to_pos(-a, r)];
      CHECK(sum.is_trivial());
    }
  }
  auto cs = lax_context(spec_of(LaxFamily::kSpinorDegenerate, 3));
  auto ws = mode_twist_charges(cs, 3, false);
  auto ring = cs->ring;
  CHECK(charge_polynomial(ws.at(cs->modes->index(ModeLabel::parse("s1,-2"))), ring) ==
        MultiPoly::var(ring, "t1") * MultiPoly::var(ring, "t2"));
  auto cf = lax_context(spec_of(LaxFamily::kFundDegenerate, 3));
  auto wv = mode_weights(cf, 3, true, {Rational(1, 2), Rational(1, 3), Rational(1, 5)});
  CHECK(wv.at(cf->modes->index(ModeLabel::parse("v1"))) == Rational(1, 10));
  CHECK(wv.at(cf->modes->index(ModeLabel::parse("v-2"))) == Rational(3, 5));
  CHECK_THROWS_AS(charge_polynomial(mode_twist_charges(cf, 3, true).at(0), ring), Error);
}

TEST_CASE("scaled limits") {
  for (int r = 2; r <= 4; ++r) {
    auto cs = lax_context(spec_of(LaxFamily::kSpinorDegenerate, r));
    auto sl = scaled_limit(LaxFamily::kSpinorFull, r, cs);
    CHECK(sl.limit == build_lax(spec_of(LaxFamily::kSpinorDegenerate, r), cs));
    CHECK_FALSE(sl.correction.is_zero());
    auto cf = lax_context(spec_of(LaxFamily::kFundDegenerate, r));
    auto fl = scaled_limit(LaxFamily::kFundFull, r, cf);
    CHECK(fl.limit == build_lax(spec_of(LaxFamily::kFundDegenerate, r), cf));
    CHECK_FALSE(fl.correction.is_zero());
  }
  CHECK_THROWS_AS(scaled_limit(LaxFamily::kD3Level3, 3, lax_context(spec_of(LaxFamily::kD3Level3, 3))), Error);
}

TEST_CASE("LaxSpec validation and JSON round trip") {
  LaxSpec s = spec_of(LaxFamily::kFundFull, 4);
  s.signs = {1, -1, 1, 1};
  s.swap = std::make_pair(1, 4);
  s.n = Rational(3, 2);
  s.reg = 2;
  CHECK(LaxSpec::from_json(s.to_json()) == s);
  LaxSpec bad = spec_of(LaxFamily::kD3Level3, 4);
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = spec_of(LaxFamily::kSpinorDegenerate, 1);
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = spec_of(LaxFamily::kSpinorDegenerate, 3);
  bad.signs = {1, 1};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.signs.clear();
  bad.s = Rational(1);
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(LaxSpec::from_json("{\"family\":\"nope\",\"rank\":3}"), Error);
  CHECK_THROWS_AS(LaxSpec::from_json("not json"), Error);
  // Register-tagged modes stay disjoint.
  auto one = spec_of(LaxFamily::kSpinorDegenerate, 3), two = one;
  one.reg = 1;
  two.reg = 2;
  CHECK_NOTHROW(make_context({lax_modes(one), lax_modes(two)}));
}
