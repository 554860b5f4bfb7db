#include "doctest.h"
#include "osclax/error.hpp"
#include "osclax/opmatrix.hpp"
#include "support.hpp"

using namespace osclax;
using osclax::testing::plain_context;
using osclax::testing::random_element;

namespace {

OpMatrix random_matrix(const ContextPtr& ctx, int r, std::mt19937& rng, int fill, bool scalars_only) {
  OpMatrix m(ctx, {r});
  std::uniform_int_distribution<int> pos(0, 2 * r - 1);
  for (int k = 0; k < fill; ++k)
    m.add(pos(rng), pos(rng), random_element(ctx, rng, 2, scalars_only ? 0 : 2));
  return m;
}

}  // namespace

TEST_CASE("signed index positions follow the e-label map") {
  auto c = plain_context(1);
  CHECK(embed_unit(c, 1, 1, 3) == e_unit(c, 4, 4, 3));
  CHECK(embed_unit(c, -3, -3, 3) == e_unit(c, 1, 1, 3));
  for (int r = 2; r <= 4; ++r) {
    for (int i = 1; i <= r; ++i)
      for (int j = 1; j <= r; ++j) {
        CHECK(embed_unit(c, -i, -j, r) == e_unit(c, r - i + 1, r - j + 1, r));
        CHECK(embed_unit(c, -i, j, r) == e_unit(c, r - i + 1, r + j, r));
        CHECK(embed_unit(c, i, -j, r) == e_unit(c, r + i, r - j + 1, r));
        CHECK(embed_unit(c, i, j, r) == e_unit(c, r + i, r + j, r));
      }
    OpMatrix sum(c, {r});
    for (int a : signed_indices(r)) sum += embed_unit(c, a, a, r);
    CHECK(sum == OpMatrix::identity(c, {r}));
  }
  CHECK_THROWS_AS(embed_unit(c, 0, 1, 3), Error);
}

TEST_CASE("R-matrix: value at zero and basis change") {
  auto c = plain_context(1);
  MultiPoly z = MultiPoly::var(c->ring, "z");
  MultiPoly zero(c->ring);
  for (int r = 2; r <= 3; ++r) CHECK(build_R(c, r, zero) == build_P(c, r) * Rational(r - 1));
  for (int r = 2; r <= 3; ++r) {
    auto plain = GaussMatrix::real(build_R(c, r, z, RBasis::kPlain));
    CHECK(conjugate_by_S(plain) == GaussMatrix::real(build_R(c, r, z, RBasis::kBold)));
  }
  auto bb = tensor(build_B(c, {1, -1, 1}), build_B(c, {1, -1, 1}));
  CHECK(commutator(build_R(c, 3, z), bb).is_zero());
}

TEST_CASE("S, J and the K -> Q identity") {
  auto c = plain_context(1);
  for (int r = 2; r <= 5; ++r) {
    auto s = build_S_scaled(c, r), si = build_Sinv_scaled(c, r);
    CHECK(s * si * Rational(1, 2) == GaussMatrix::real(OpMatrix::identity(c, {r})));
    CHECK(build_J(c, r) * build_J(c, r) == OpMatrix::identity(c, {r}));
  }
  for (int r = 2; r <= 4; ++r) CHECK(conjugate_by_S(GaussMatrix::real(build_K(c, r))) == GaussMatrix::real(build_Q(c, r)));
  // Identity and permutation are unaffected.
  CHECK(conjugate_by_S(GaussMatrix::real(build_P(c, 3))) == GaussMatrix::real(build_P(c, 3)));
}

TEST_CASE("S action on e-units matches the component formulas") {
  auto c = plain_context(1);
  const int r = 3;
  auto E = [&](int a, int b) { return GaussMatrix::real(embed_unit(c, a, b, r)); };
  auto imag = [&](const GaussMatrix& m) { return GaussMatrix{OpMatrix(c, {r}), m.re}; };
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= r; ++j) {
      auto conj = [&](int A, int B) { return conjugate_by_S(GaussMatrix::real(e_unit(c, A, B, r))); };
      CHECK(conj(i, j) == (E(-i, -j) - E(-i, j) - E(i, -j) + E(i, j)) * Rational(1, 2));
      CHECK(conj(i, r + j) == imag(E(i, -j) + E(i, j) - E(-i, -j) - E(-i, j)) * Rational(1, 2));
      CHECK(conj(r + i, j) == imag(E(-i, -j) - E(-i, j) + E(i, -j) - E(i, j)) * Rational(1, 2));
      CHECK(conj(r + i, r + j) == (E(-i, -j) + E(-i, j) + E(i, -j) + E(i, j)) * Rational(1, 2));
    }
}

TEST_CASE("B matrices") {
  auto c = plain_context(1);
  CHECK(build_B(c, {1, 1, 1}) == OpMatrix::identity(c, {3}));
  CHECK(build_B(c, {-1, -1, -1}) == build_J(c, 3));
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<int> alpha{mask & 1 ? -1 : 1, mask & 2 ? -1 : 1, mask & 4 ? -1 : 1};
    auto b = build_B(c, alpha);
    CHECK(b == prime_transpose(b));
    CHECK(b * prime_transpose(b) == OpMatrix::identity(c, {3}));
  }
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      if (i == j) continue;
      auto bt = build_Btilde(c, 4, i, j);
      CHECK(bt == prime_transpose(bt));
      CHECK(bt * prime_transpose(bt) == OpMatrix::identity(c, {4}));
    }
  CHECK_THROWS_AS(build_Btilde(c, 3, 2, 2), Error);
  CHECK_THROWS_AS(build_B(c, {1, 0}), Error);
}

TEST_CASE("transposes") {
  auto c = plain_context(2);
  CHECK(prime_transpose(embed_unit(c, 1, 2, 3)) == embed_unit(c, -2, -1, 3));
  CHECK(t_transpose(embed_unit(c, 1, 2, 3)) == embed_unit(c, 2, 1, 3));
  std::mt19937 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = random_matrix(c, 3, rng, 8, false);
    CHECK(prime_transpose(prime_transpose(m)) == m);
    CHECK(t_transpose(t_transpose(m)) == m);
    auto a = random_matrix(c, 3, rng, 8, true), b = random_matrix(c, 3, rng, 8, true);
    CHECK(prime_transpose(a * b) == prime_transpose(b) * prime_transpose(a));
  }
}

TEST_CASE("matmul and tensor properties") {
  auto c = plain_context(2);
  std::mt19937 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_matrix(c, 2, rng, 6, false), b = random_matrix(c, 2, rng, 6, false),
         d = random_matrix(c, 2, rng, 6, false);
    CHECK((a * b) * d == a * (b * d));
    auto s1 = random_matrix(c, 2, rng, 5, true), s2 = random_matrix(c, 2, rng, 5, true),
         s3 = random_matrix(c, 2, rng, 5, true), s4 = random_matrix(c, 2, rng, 5, true);
    CHECK(tensor(s1, s2) * tensor(s3, s4) == tensor(s1 * s3, s2 * s4));
    CHECK(tensor(s1 + s3, s2) == tensor(s1, s2) + tensor(s3, s2));
  }
}

TEST_CASE("generator extraction round trip") {
  auto c = plain_context(2);
  int z = c->ring->index("z");
  auto zi = OpMatrix::identity(c, {2}) * MultiPoly::var(c->ring, "z");
  CHECK(extract_generators(zi, z).F.empty());
  std::mt19937 rng(4);
  auto l = zi + random_matrix(c, 2, rng, 6, false).coeff(z, 0);
  auto g = extract_generators(l, z);
  CHECK(rebuild_from_generators(g, z) == l);
  CHECK_THROWS_AS(extract_generators(zi * MultiPoly::var(c->ring, "z"), z), Error);
  CHECK_THROWS_AS(extract_generators(zi * Rational(2), z), Error);
}

TEST_CASE("F <-> M map round trip and zero") {
  auto c = plain_context(2);
  GeneratorSet zero{3, c, {}};
  CHECK(map_F_to_M(zero).M.empty());
  std::mt19937 rng(8);
  for (int r = 2; r <= 3; ++r) {
    GeneratorSet g{r, c, {}};
    // Antisymmetric random F: F_ab = -F_{-b,-a}.
    for (int a : signed_indices(r))
      for (int b : signed_indices(r)) {
        if (g.F.count({a, b})) continue;
        auto e = random_element(c, rng, 2, 2);
        g.F[{a, b}] = e;
        if (!(a == -b)) g.F[{-b, -a}] = -e;
        else g.F[{a, b}] = AlgebraElement(c);
      }
    auto m = map_F_to_M(g);
    for (int A = 1; A <= 2 * r; ++A)
      for (int B = 1; B <= 2 * r; ++B) CHECK((m.get(A, B) + m.get(B, A)).is_zero());
    auto back = map_M_to_F(m, c);
    for (int a : signed_indices(r))
      for (int b : signed_indices(r)) {
        CHECK(back[{a, b}].re == g.get(a, b));
        CHECK(back[{a, b}].im.is_zero());
      }
  }
}
