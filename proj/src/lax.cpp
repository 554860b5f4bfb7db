#include "osclax/lax.hpp"

#include <algorithm>

#include "dense.hpp"
#include "json.hpp"
#include "osclax/error.hpp"

namespace osclax {

namespace {

using Json = nlohmann::json;
using namespace detail;

MultiPoly constant(const ContextPtr& ctx, const Rational& c) { return MultiPoly(ctx->ring, c); }

MultiPoly label_poly(const ContextPtr& ctx, const std::optional<Rational>& value, const char* var) {
  return value ? constant(ctx, *value) : MultiPoly::var(ctx->ring, var);
}

int spinor_mode(const ContextPtr& ctx, int i, int j, std::uint8_t reg) {
  return ctx->modes->index({reg, 's', static_cast<std::int16_t>(i), static_cast<std::int16_t>(-j)});
}

int vector_mode(const ContextPtr& ctx, int k, std::uint8_t reg) {
  return ctx->modes->index({reg, 'v', static_cast<std::int16_t>(k), 0});
}

// Row vector of vector-mode creations and column of annihilations for rank r.
struct VectorBlocks {
  Dense wp;  // 1 x (2r-2)
  Dense w;   // (2r-2) x 1
};

VectorBlocks vector_blocks(const ContextPtr& ctx, int r, std::uint8_t reg) {
  int n = 2 * r - 2;
  VectorBlocks b{Dense(ctx, 1, n), Dense(ctx, n, 1)};
  for (int p = 0; p < n; ++p) {
    int mode = vector_mode(ctx, pos_to_signed(p, r - 1), reg);
    b.wp.at(0, p) = AlgebraElement::creation(ctx, mode);
    b.w.at(p, 0) = AlgebraElement::annihilation(ctx, mode);
  }
  return b;
}

// U(wp) = [[1, wp, -1/2 wp J wp^t], [0, I, -J wp^t], [0, 0, 1]] and, with
// inverse = true, its inverse.
OpMatrix upper_unipotent(const ContextPtr& ctx, int r, const Dense& wp, bool inverse) {
  int n = 2 * r - 2;
  Dense J = Dense::exchange(ctx, n);
  Dense one = Dense::identity(ctx, 1), I = Dense::identity(ctx, n);
  Dense row = inverse ? -wp : wp;
  Dense corner = (wp * J * wp.transpose()) * Rational(-1, 2);
  Dense col = inverse ? J * wp.transpose() : -(J * wp.transpose());
  return assemble(ctx, r, {1, n, 1}, {{&one, &row, &corner}, {nullptr, &I, &col}, {nullptr, nullptr, &one}});
}

// [[1, 0, 0], [-w, I, 0], [-1/2 w^t J w, w^t J, 1]]
OpMatrix lower_unipotent(const ContextPtr& ctx, int r, const Dense& w) {
  int n = 2 * r - 2;
  Dense J = Dense::exchange(ctx, n);
  Dense one = Dense::identity(ctx, 1), I = Dense::identity(ctx, n);
  Dense col = -w;
  Dense corner = (w.transpose() * J * w) * Rational(-1, 2);
  Dense row = w.transpose() * J;
  return assemble(ctx, r, {1, n, 1}, {{&one, nullptr, nullptr}, {&col, &I, nullptr}, {&corner, &row, &one}});
}

OpMatrix block_diag3(const ContextPtr& ctx, int r, const AlgebraElement& first, const Dense& middle,
                     const AlgebraElement& last) {
  Dense f = Dense::scalar(ctx, first), l = Dense::scalar(ctx, last);
  return assemble(ctx, r, {1, 2 * r - 2, 1}, {{&f, nullptr, nullptr}, {nullptr, &middle, nullptr}, {nullptr, nullptr, &l}});
}

// Spinor-full Lax matrix of rank m as a dense 2m x 2m block (z the argument).
Dense spinor_full_dense(const ContextPtr& ctx, int m, std::uint8_t reg, const MultiPoly& z, const MultiPoly& s) {
  auto blocks = spinor_blocks(ctx, m, reg);
  Dense Ab = to_dense(blocks, true), A = to_dense(blocks, false);
  MultiPoly kappa = constant(ctx, Rational(m - 1));
  Dense AAb = A * Ab;
  Dense tl = Dense::scalar_identity(ctx, m, z + s) + Ab * A;
  Dense tr = -(Ab * (Dense::scalar_identity(ctx, m, s * Rational(2) + kappa) + AAb));
  Dense br = Dense::scalar_identity(ctx, m, z - s - kappa) - AAb;
  Dense d(ctx, 2 * m, 2 * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      d.at(i, j) = tl.at(i, j);
      d.at(i, m + j) = tr.at(i, j);
      d.at(m + i, j) = A.at(i, j);
      d.at(m + i, m + j) = br.at(i, j);
    }
  return d;
}

OpMatrix matrix_of(const Dense& d, int r) {
  OpMatrix m(d.ctx, {r});
  for (int i = 0; i < d.rows; ++i)
    for (int j = 0; j < d.cols; ++j)
      if (!d.at(i, j).is_zero()) m.set(i, j, d.at(i, j));
  return m;
}

// ---- families ----

OpMatrix d3_level3(const ContextPtr& ctx, const MultiPoly& z, std::uint8_t reg) {
  auto mode = [&](int k) { return ctx->modes->index({reg, 'a', static_cast<std::int16_t>(k), 0}); };
  auto ad = [&](int k) { return AlgebraElement::creation(ctx, mode(k)); };
  auto a = [&](int k) { return AlgebraElement::annihilation(ctx, mode(k)); };
  auto N = [&](int k) { return ad(k) * a(k); };
  AlgebraElement zz(ctx, z), one(ctx, Rational(1)), zero(ctx);
  std::vector<std::vector<AlgebraElement>> rows = {
      {zz - N(1) - N(2), -(ad(1) * a(3)), ad(2) * a(3), ad(1), ad(2), zero},
      {-(ad(3) * a(1)), zz - N(2) - N(3), -(ad(2) * a(1)), ad(3), zero, -ad(2)},
      {ad(3) * a(2), -(ad(1) * a(2)), zz - N(1) - N(3), zero, -ad(3), -ad(1)},
      {-a(1), -a(3), zero, one, zero, zero},
      {-a(2), zero, a(3), zero, one, zero},
      {zero, a(2), a(1), zero, zero, one},
  };
  OpMatrix m(ctx, {3});
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (!rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].is_zero())
        m.set(i, j, rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  return m;
}

OpMatrix d3_level2(const ContextPtr& ctx, const MultiPoly& z, std::uint8_t reg) {
  auto mode = [&](int k) { return ctx->modes->index({reg, 'a', static_cast<std::int16_t>(k), 0}); };
  auto ad = [&](int k) { return AlgebraElement::creation(ctx, mode(k)); };
  auto a = [&](int k) { return AlgebraElement::annihilation(ctx, mode(k)); };
  OpMatrix mp(ctx, {3}), mm(ctx, {3}), m0(ctx, {3});
  for (int k = 1; k <= 4; ++k) {
    mp.set(0, k, ad(k));
    mp.set(k, 5, -ad(5 - k));
    mm.set(k, 0, -a(k));
    mm.set(5, k, a(5 - k));
  }
  m0.set(0, 0, AlgebraElement(ctx, z * z - z));
  for (int k = 1; k <= 4; ++k) m0.set(k, k, AlgebraElement(ctx, z));
  m0.set(5, 5, AlgebraElement(ctx, Rational(1)));
  // Both exponents truncate at second order.
  auto expo = [&](const OpMatrix& x) {
    return OpMatrix::identity(ctx, {3}) + x + x * x * Rational(1, 2);
  };
  return expo(mp) * m0 * expo(mm);
}

OpMatrix spinor_degenerate(const ContextPtr& ctx, int r, const MultiPoly& z, std::uint8_t reg, bool factorized) {
  auto b = spinor_blocks(ctx, r, reg);
  Dense Ab = to_dense(b, true), A = to_dense(b, false);
  Dense I = Dense::identity(ctx, r);
  if (!factorized) {
    Dense tl = Dense::scalar_identity(ctx, r, z) + Ab * A;
    return assemble(ctx, r, {r, r}, {{&tl, &Ab}, {&A, &I}});
  }
  Dense zI = Dense::scalar_identity(ctx, r, z);
  auto left = assemble(ctx, r, {r, r}, {{&I, &Ab}, {nullptr, &I}});
  auto mid = assemble(ctx, r, {r, r}, {{&zI, nullptr}, {nullptr, &I}});
  auto right = assemble(ctx, r, {r, r}, {{&I, nullptr}, {&A, &I}});
  return left * mid * right;
}

OpMatrix fund_degenerate(const ContextPtr& ctx, int r, const MultiPoly& z, std::uint8_t reg, bool factorized) {
  int n = 2 * r - 2;
  auto [wp, w] = vector_blocks(ctx, r, reg);
  if (factorized) {
    AlgebraElement first(ctx, z * (z - constant(ctx, Rational(r - 2))));
    return upper_unipotent(ctx, r, wp, false) *
           block_diag3(ctx, r, first, Dense::scalar_identity(ctx, n, z), AlgebraElement(ctx, Rational(1))) *
           lower_unipotent(ctx, r, w);
  }
  Dense J = Dense::exchange(ctx, n);
  AlgebraElement zz(ctx, z);
  AlgebraElement pJp = (wp * J * wp.transpose()).as_scalar();
  AlgebraElement wJw = (w.transpose() * J * w).as_scalar();
  AlgebraElement wpw = (wp * w).as_scalar();
  Dense Jpt = J * wp.transpose(), wtJ = w.transpose() * J;
  Dense b11 = Dense::scalar(ctx, AlgebraElement(ctx, z * z) +
                                     zz * (AlgebraElement(ctx, Rational(2 - r)) - wpw) +
                                     pJp * wJw * Rational(1, 4));
  Dense b12 = wp * z - pJp * wtJ * Rational(1, 2);
  Dense b13 = Dense::scalar(ctx, pJp * Rational(-1, 2));
  Dense b21 = -(w * z) + Jpt * Dense::scalar(ctx, wJw) * Rational(1, 2);
  Dense b22 = Dense::scalar_identity(ctx, n, z) - Jpt * wtJ;
  Dense b23 = -Jpt;
  Dense b31 = Dense::scalar(ctx, wJw * Rational(-1, 2));
  Dense b32 = wtJ;
  Dense b33 = Dense::identity(ctx, 1);
  return assemble(ctx, r, {1, n, 1}, {{&b11, &b12, &b13}, {&b21, &b22, &b23}, {&b31, &b32, &b33}});
}

OpMatrix spinor_full(const ContextPtr& ctx, int r, const MultiPoly& z, const MultiPoly& s, std::uint8_t reg,
                     bool factorized) {
  if (!factorized) return matrix_of(spinor_full_dense(ctx, r, reg, z, s), r);
  auto b = spinor_blocks(ctx, r, reg);
  Dense Ab = to_dense(b, true), A = to_dense(b, false);
  Dense I = Dense::identity(ctx, r), mAb = -Ab;
  Dense d1 = Dense::scalar_identity(ctx, r, z + s);
  Dense d2 = Dense::scalar_identity(ctx, r, z - s - constant(ctx, Rational(r - 1)));
  auto left = assemble(ctx, r, {r, r}, {{&I, &Ab}, {nullptr, &I}});
  auto mid = assemble(ctx, r, {r, r}, {{&d1, nullptr}, {&A, &d2}});
  auto right = assemble(ctx, r, {r, r}, {{&I, &mAb}, {nullptr, &I}});
  return left * mid * right;
}

OpMatrix quad_with_spinor(const ContextPtr& ctx, int r, const MultiPoly& z, const MultiPoly& s, std::uint8_t reg,
                          bool factorized) {
  int n = 2 * r - 2;
  auto [wp, w] = vector_blocks(ctx, r, reg);
  Dense Ls = spinor_full_dense(ctx, r - 1, reg, z, s);
  MultiPoly first = (z + s) * (z - s - constant(ctx, Rational(r - 2)));
  if (factorized) {
    return upper_unipotent(ctx, r, wp, false) *
           block_diag3(ctx, r, AlgebraElement(ctx, first), Ls, AlgebraElement(ctx, Rational(1))) *
           lower_unipotent(ctx, r, w);
  }
  Dense J = Dense::exchange(ctx, n);
  AlgebraElement pJp = (wp * J * wp.transpose()).as_scalar();
  AlgebraElement wJw = (w.transpose() * J * w).as_scalar();
  Dense Jpt = J * wp.transpose(), wtJ = w.transpose() * J;
  Dense b11 = Dense::scalar(ctx, AlgebraElement(ctx, first) - (wp * Ls * w).as_scalar() +
                                     pJp * wJw * Rational(1, 4));
  Dense b12 = wp * Ls - pJp * wtJ * Rational(1, 2);
  Dense b13 = Dense::scalar(ctx, pJp * Rational(-1, 2));
  Dense b21 = -(Ls * w) + Jpt * Dense::scalar(ctx, wJw) * Rational(1, 2);
  Dense b22 = Ls - Jpt * wtJ;
  Dense b23 = -Jpt;
  Dense b31 = Dense::scalar(ctx, wJw * Rational(-1, 2));
  Dense b32 = wtJ;
  Dense b33 = Dense::identity(ctx, 1);
  return assemble(ctx, r, {1, n, 1}, {{&b11, &b12, &b13}, {&b21, &b22, &b23}, {&b31, &b32, &b33}});
}

OpMatrix fund_full(const ContextPtr& ctx, int r, const MultiPoly& z, const std::optional<Rational>& s_value,
                   const MultiPoly& nn, std::uint8_t reg) {
  int n = 2 * r - 2;
  auto [wp, w] = vector_blocks(ctx, r, reg);
  MultiPoly x1 = (constant(ctx, Rational(2 - r)) - nn) * Rational(1, 2);
  MultiPoly x2 = (constant(ctx, Rational(r)) + nn) * Rational(1, 2);
  MultiPoly z1 = z - x1, z2 = z - x2;
  bool reduced = s_value && s_value->is_zero();
  Dense Ls = reduced ? Dense::scalar_identity(ctx, n, z1)
                     : spinor_full_dense(ctx, r - 1, reg, z1, label_poly(ctx, s_value, "s"));
  Dense J = Dense::exchange(ctx, n);
  // s-dependent top corner; at s = 0 this is z1 (z1 - r + 2)
  MultiPoly sv = reduced ? constant(ctx, Rational(0)) : label_poly(ctx, s_value, "s");
  Dense b11 = Dense::scalar(ctx, AlgebraElement(ctx, (z1 + sv) * (z1 - sv - constant(ctx, Rational(r - 2)))));
  Dense b21 = -(Ls * w);
  Dense b22 = Ls * z2;
  Dense b31 = Dense::scalar(ctx, (w.transpose() * J * w).as_scalar() * Rational(-1, 2));
  Dense b32 = w.transpose() * J * z2;
  Dense b33 = Dense::scalar(ctx, AlgebraElement(ctx, z2 * (z2 - constant(ctx, Rational(r - 2)))));
  auto core = assemble(ctx, r, {1, n, 1}, {{&b11, nullptr, nullptr}, {&b21, &b22, nullptr}, {&b31, &b32, &b33}});
  return upper_unipotent(ctx, r, wp, false) * core * upper_unipotent(ctx, r, wp, true);
}

OpMatrix build_raw(const LaxSpec& spec, const ContextPtr& ctx, const MultiPoly& z, bool factorized) {
  int r = spec.rank;
  MultiPoly s = label_poly(ctx, spec.s, "s");
  switch (spec.family) {
    case LaxFamily::kD3Level3: return d3_level3(ctx, z, spec.reg);
    case LaxFamily::kD3Level2: return d3_level2(ctx, z, spec.reg);
    case LaxFamily::kSpinorDegenerate: return spinor_degenerate(ctx, r, z, spec.reg, factorized);
    case LaxFamily::kFundDegenerate: return fund_degenerate(ctx, r, z, spec.reg, factorized);
    case LaxFamily::kSpinorFull: return spinor_full(ctx, r, z, s, spec.reg, factorized);
    case LaxFamily::kQuadWithSpinor: return quad_with_spinor(ctx, r, z, s, spec.reg, factorized);
    case LaxFamily::kFundFull: return fund_full(ctx, r, z, spec.s, label_poly(ctx, spec.n, "n"), spec.reg);
  }
  fail(ErrorCode::kInvalidArgument, "unknown family");
}

OpMatrix apply_conjugations(const LaxSpec& spec, const ContextPtr& ctx, OpMatrix l) {
  if (!spec.signs.empty()) {
    auto b = build_B(ctx, spec.signs);
    l = b * l * prime_transpose(b);
  }
  if (spec.swap) {
    auto b = build_Btilde(ctx, spec.rank, spec.swap->first, spec.swap->second);
    l = b * l * prime_transpose(b);
  }
  return l;
}

const std::vector<std::pair<LaxFamily, const char*>> kFamilyNames = {
    {LaxFamily::kD3Level3, "d3-level3"},
    {LaxFamily::kD3Level2, "d3-level2"},
    {LaxFamily::kSpinorDegenerate, "spinor-degenerate"},
    {LaxFamily::kFundDegenerate, "fund-degenerate"},
    {LaxFamily::kSpinorFull, "spinor-full"},
    {LaxFamily::kQuadWithSpinor, "quad-with-spinor"},
    {LaxFamily::kFundFull, "fund-full"},
};

}  // namespace

const char* family_name(LaxFamily f) {
  for (const auto& [k, name] : kFamilyNames)
    if (k == f) return name;
  return "?";
}

LaxFamily parse_family(const std::string& name) {
  for (const auto& [k, n] : kFamilyNames)
    if (name == n) return k;
  fail(ErrorCode::kInvalidArgument, "unknown family '" + name + "'");
}

void LaxSpec::validate() const {
  bool d3 = family == LaxFamily::kD3Level3 || family == LaxFamily::kD3Level2;
  require(rank >= 2, ErrorCode::kInvalidArgument, "rank must be at least 2");
  require(rank <= 5, ErrorCode::kInvalidArgument, "rank above 5 is not supported");
  require(!d3 || rank == 3, ErrorCode::kInvalidArgument, std::string(family_name(family)) + " requires rank 3");
  require(reg <= 2, ErrorCode::kInvalidArgument, "register must be 0, 1 or 2");
  if (!signs.empty()) {
    require(static_cast<int>(signs.size()) == rank, ErrorCode::kInvalidArgument, "signs must have rank entries");
    for (int a : signs) require(a == 1 || a == -1, ErrorCode::kInvalidArgument, "signs must be +-1");
  }
  if (swap) {
    auto [i, j] = *swap;
    require(i >= 1 && i <= rank && j >= 1 && j <= rank && i != j, ErrorCode::kInvalidArgument,
            "swap needs two distinct indices in 1..rank");
  }
  bool uses_s = family == LaxFamily::kSpinorFull || family == LaxFamily::kQuadWithSpinor || family == LaxFamily::kFundFull;
  require(uses_s || !s, ErrorCode::kInvalidArgument, "s label not used by this family");
  require(family == LaxFamily::kFundFull || !n, ErrorCode::kInvalidArgument, "n label not used by this family");
}

std::string LaxSpec::to_json() const {
  Json j;
  j["family"] = family_name(family);
  j["rank"] = rank;
  if (!signs.empty()) j["signs"] = signs;
  if (swap) j["swap"] = {swap->first, swap->second};
  Json labels = Json::object();
  if (s) labels["s"] = s->str();
  if (n) labels["n"] = n->str();
  if (!labels.empty()) j["labels"] = labels;
  j["register"] = reg;
  return j.dump();
}

LaxSpec LaxSpec::from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::kParse, std::string("bad LaxSpec JSON: ") + e.what());
  }
  LaxSpec spec;
  try {
    spec.family = parse_family(j.at("family").get<std::string>());
    spec.rank = j.at("rank").get<int>();
    if (j.contains("signs")) spec.signs = j["signs"].get<std::vector<int>>();
    if (j.contains("swap")) spec.swap = std::make_pair(j["swap"].at(0).get<int>(), j["swap"].at(1).get<int>());
    if (j.contains("labels")) {
      const auto& l = j["labels"];
      if (l.contains("s")) spec.s = Rational::parse(l["s"].get<std::string>());
      if (l.contains("n")) spec.n = Rational::parse(l["n"].get<std::string>());
    }
    if (j.contains("register")) spec.reg = j["register"].get<std::uint8_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("bad LaxSpec JSON: ") + e.what());
  }
  spec.validate();
  return spec;
}

RingPtr standard_ring() {
  static const RingPtr ring = Ring::make({"z", "x", "y", "u", "s", "n", "t1", "t2", "t3", "t4", "t5"});
  return ring;
}

std::vector<ModeLabel> spinor_modes(int r, std::uint8_t reg) {
  std::vector<ModeLabel> out;
  for (int j = 2; j <= r; ++j)
    for (int i = 1; i < j; ++i) out.push_back({reg, 's', static_cast<std::int16_t>(i), static_cast<std::int16_t>(-j)});
  return out;
}

std::vector<ModeLabel> vector_modes(int r, std::uint8_t reg) {
  std::vector<ModeLabel> out;
  for (int k : signed_indices(r - 1)) out.push_back({reg, 'v', static_cast<std::int16_t>(k), 0});
  return out;
}

std::vector<ModeLabel> lax_modes(const LaxSpec& spec) {
  spec.validate();
  int r = spec.rank;
  auto plain = [&](int count) {
    std::vector<ModeLabel> out;
    for (int k = 1; k <= count; ++k) out.push_back({spec.reg, 'a', static_cast<std::int16_t>(k), 0});
    return out;
  };
  auto join = [](std::vector<ModeLabel> a, const std::vector<ModeLabel>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  switch (spec.family) {
    case LaxFamily::kD3Level3: return plain(3);
    case LaxFamily::kD3Level2: return plain(4);
    case LaxFamily::kSpinorDegenerate:
    case LaxFamily::kSpinorFull: return spinor_modes(r, spec.reg);
    case LaxFamily::kFundDegenerate: return vector_modes(r, spec.reg);
    case LaxFamily::kQuadWithSpinor: return join(spinor_modes(r - 1, spec.reg), vector_modes(r, spec.reg));
    case LaxFamily::kFundFull:
      if (spec.s && spec.s->is_zero()) return vector_modes(r, spec.reg);
      return join(spinor_modes(r - 1, spec.reg), vector_modes(r, spec.reg));
  }
  return {};
}

ContextPtr make_context(const std::vector<std::vector<ModeLabel>>& groups) {
  std::vector<ModeLabel> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  return AlgebraContext::make(standard_ring(), ModeSpace::make(std::move(all)));
}

ContextPtr lax_context(const LaxSpec& spec) { return make_context({lax_modes(spec)}); }

OpMatrix build_lax(const LaxSpec& spec, const ContextPtr& ctx, const MultiPoly& arg) {
  spec.validate();
  return apply_conjugations(spec, ctx, build_raw(spec, ctx, arg, false));
}

OpMatrix build_lax(const LaxSpec& spec, const ContextPtr& ctx, const std::string& var) {
  return build_lax(spec, ctx, MultiPoly::var(ctx->ring, var));
}

OpMatrix build_lax_factorized(const LaxSpec& spec, const ContextPtr& ctx, const MultiPoly& arg) {
  spec.validate();
  return apply_conjugations(spec, ctx, build_raw(spec, ctx, arg, true));
}

SpinorBlocks spinor_blocks(const ContextPtr& ctx, int m, std::uint8_t reg) {
  SpinorBlocks b;
  b.abar.assign(static_cast<std::size_t>(m), std::vector<AlgebraElement>(static_cast<std::size_t>(m), AlgebraElement(ctx)));
  b.a = b.abar;
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) {
      // Abar row p <-> -(m-p), column q <-> q+1.
      int i = m - p, j = q + 1;
      auto& ab = b.abar[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
      if (i > j) ab = AlgebraElement::creation(ctx, spinor_mode(ctx, j, i, reg));
      else if (i < j) ab = -AlgebraElement::creation(ctx, spinor_mode(ctx, i, j, reg));
      // A row p <-> p+1, column q <-> -(m-q).
      int ai = p + 1, aj = m - q;
      auto& a = b.a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
      if (ai < aj) a = -AlgebraElement::annihilation(ctx, spinor_mode(ctx, ai, aj, reg));
      else if (ai > aj) a = AlgebraElement::annihilation(ctx, spinor_mode(ctx, aj, ai, reg));
    }
  return b;
}

OpMatrix build_G(GKind kind, const ContextPtr& ctx, int r, std::uint8_t reg) {
  switch (kind) {
    case GKind::kSpinor: {
      Dense I = Dense::identity(ctx, r);
      Dense b = -to_dense(spinor_blocks(ctx, r, reg), false).transpose();
      return assemble(ctx, r, {r, r}, {{&I, &b}, {nullptr, &I}});
    }
    case GKind::kQuad: {
      int m = r - 1;
      Dense one = Dense::identity(ctx, 1), I = Dense::identity(ctx, m);
      Dense b = -to_dense(spinor_blocks(ctx, m, reg), false).transpose();
      return assemble(ctx, r, {1, m, m, 1},
                      {{&one, nullptr, nullptr, nullptr},
                       {nullptr, &I, &b, nullptr},
                       {nullptr, nullptr, &I, nullptr},
                       {nullptr, nullptr, nullptr, &one}});
    }
    case GKind::kFund: {
      int n = 2 * r - 2;
      auto vb = vector_blocks(ctx, r, reg);
      Dense J = Dense::exchange(ctx, n);
      Dense one = Dense::identity(ctx, 1), I = Dense::identity(ctx, n);
      Dense row = vb.w.transpose() * J;
      Dense corner = (vb.w.transpose() * J * vb.w) * Rational(-1, 2);
      Dense col = -vb.w;
      return assemble(ctx, r, {1, n, 1}, {{&one, &row, &corner}, {nullptr, &I, &col}, {nullptr, nullptr, &one}});
    }
  }
  fail(ErrorCode::kInvalidArgument, "unknown G kind");
}

// ---- twists ----

Charge& Charge::operator+=(const Charge& o) {
  if (c.size() < o.c.size()) c.resize(o.c.size(), 0);
  for (std::size_t k = 0; k < o.c.size(); ++k) c[k] += o.c[k];
  return *this;
}

Charge Charge::operator-() const {
  Charge out = *this;
  for (int& x : out.c) x = -x;
  return out;
}

bool Charge::is_trivial() const {
  return std::all_of(c.begin(), c.end(), [](int x) { return x == 0; });
}

std::vector<Charge> fundamental_twist_charges(int r) {
  std::vector<Charge> out;
  for (int a : signed_indices(r)) {
    Charge ch(r);
    ch.c[static_cast<std::size_t>(std::abs(a) - 1)] = a > 0 ? 1 : -1;
    out.push_back(ch);
  }
  return out;
}

std::map<int, Charge> mode_twist_charges(const ContextPtr& ctx, int r, bool fundamental) {
  std::map<int, Charge> out;
  for (int id = 0; id < ctx->modes->size(); ++id) {
    const auto& l = ctx->modes->label(id);
    Charge ch(r);
    if (!fundamental && l.family == 's') {
      ch.c[static_cast<std::size_t>(l.i - 1)] += 1;
      ch.c[static_cast<std::size_t>(-l.j - 1)] += 1;
    } else if (fundamental && l.family == 'v') {
      ch.c[static_cast<std::size_t>(r - 1)] += 1;
      ch.c[static_cast<std::size_t>(std::abs(l.i) - 1)] += l.i > 0 ? 1 : -1;
    } else {
      continue;
    }
    out[id] = ch;
  }
  return out;
}

Rational evaluate_charge(const Charge& ch, const std::vector<Rational>& twists) {
  Rational v(1);
  for (std::size_t k = 0; k < ch.c.size(); ++k) {
    if (!ch.c[k]) continue;
    require(k < twists.size(), ErrorCode::kInvalidArgument, "twist t" + std::to_string(k + 1) + " missing");
    v *= twists[k].pow(ch.c[k]);
  }
  return v;
}

MultiPoly charge_polynomial(const Charge& ch, const RingPtr& ring) {
  MultiPoly p(ring, Rational(1));
  for (std::size_t k = 0; k < ch.c.size(); ++k) {
    require(ch.c[k] >= 0, ErrorCode::kInvalidArgument, "charge has a negative exponent");
    if (ch.c[k]) p *= MultiPoly::var(ring, "t" + std::to_string(k + 1)).pow(ch.c[k]);
  }
  return p;
}

OpMatrix build_twist_D(const ContextPtr& ctx, const std::vector<Rational>& twists) {
  int r = static_cast<int>(twists.size());
  require(r >= 1, ErrorCode::kInvalidArgument, "twists must not be empty");
  for (const auto& t : twists) require(!t.is_zero(), ErrorCode::kInvalidArgument, "twist must be nonzero");
  auto charges = fundamental_twist_charges(r);
  OpMatrix d(ctx, {r});
  for (int p = 0; p < 2 * r; ++p)
    d.set(p, p, AlgebraElement(ctx, evaluate_charge(charges[static_cast<std::size_t>(p)], twists)));
  return d;
}

std::map<int, Rational> mode_weights(const ContextPtr& ctx, int r, bool fundamental,
                                     const std::vector<Rational>& twists) {
  std::map<int, Rational> out;
  for (const auto& [id, ch] : mode_twist_charges(ctx, r, fundamental)) out[id] = evaluate_charge(ch, twists);
  return out;
}

// ---- limits ----

LimitResult scaled_limit(LaxFamily family, int r, const ContextPtr& ctx) {
  const auto& ring = ctx->ring;
  MultiPoly z = MultiPoly::var(ring, "z");
  OpMatrix p;
  int var = 0, lead = 0;
  if (family == LaxFamily::kSpinorFull || family == LaxFamily::kSpinorDegenerate) {
    LaxSpec spec{LaxFamily::kSpinorFull, r, {}, std::nullopt, std::nullopt, std::nullopt, 0};
    MultiPoly s = MultiPoly::var(ring, "s");
    OpMatrix scale(ctx, {r});
    for (int k = 0; k < r; ++k) {
      scale.set(k, k, AlgebraElement(ctx, s));
      scale.set(r + k, r + k, AlgebraElement(ctx, Rational(-1, 2)));
    }
    p = build_lax(spec, ctx, z - s) * scale;
    var = ring->index("s");
    lead = 1;
  } else if (family == LaxFamily::kFundFull || family == LaxFamily::kFundDegenerate) {
    LaxSpec spec{LaxFamily::kFundFull, r, {}, std::nullopt, Rational(0), std::nullopt, 0};
    MultiPoly n = MultiPoly::var(ring, "n");
    MultiPoly x1 = (MultiPoly(ring, Rational(2 - r)) - n) * Rational(1, 2);
    OpMatrix scale(ctx, {r});
    scale.set(0, 0, AlgebraElement(ctx, n * n));
    for (int k = 1; k < 2 * r - 1; ++k) scale.set(k, k, AlgebraElement(ctx, -n));
    scale.set(2 * r - 1, 2 * r - 1, AlgebraElement(ctx, Rational(1)));
    p = build_lax(spec, ctx, z + x1) * scale;
    var = ring->index("n");
    lead = 2;
  } else {
    fail(ErrorCode::kInvalidArgument, "scaled limit exists for the spinor and fundamental families only");
  }
  int deg = p.degree(var);
  require(deg <= lead, ErrorCode::kStructural,
          "scaled product grows like " + ring->name(var) + "^" + std::to_string(deg - lead));
  return {p.coeff(var, lead), p.coeff(var, lead - 1)};
}

AlgebraElement relabel(const AlgebraElement& e, const ContextPtr& target, const std::map<int, int>& mode_map) {
  require(e.context() == nullptr || e.context()->ring->same_as(*target->ring), ErrorCode::kContextMismatch,
          "relabel needs a common ring");
  AlgebraElement out(target);
  for (const auto& [mono, coef] : e.terms()) {
    std::vector<OscMonomial::Factor> f = mono.factors();
    for (auto& x : f) {
      auto it = mode_map.find(x.mode);
      require(it != mode_map.end(), ErrorCode::kContextMismatch,
              "mode " + e.context()->modes->label(x.mode).name() + " has no image");
      x.mode = it->second;
    }
    std::sort(f.begin(), f.end(), [](const auto& a, const auto& b) { return a.mode < b.mode; });
    OscMonomial m;
    for (const auto& x : f) m.push(x.mode, x.p, x.q);
    out.add_term(m, coef);
  }
  return out;
}

OpMatrix relabel(const OpMatrix& m, const ContextPtr& target, const std::map<int, int>& mode_map) {
  OpMatrix out(target, m.ranks());
  for (const auto& [key, e] : m.entries()) out.set(key.first, key.second, relabel(e, target, mode_map));
  return out;
}

}  // namespace osclax
