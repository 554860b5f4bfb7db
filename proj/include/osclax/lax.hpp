#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "osclax/opmatrix.hpp"

namespace osclax {

enum class LaxFamily {
  kD3Level3,
  kD3Level2,
  kSpinorDegenerate,
  kFundDegenerate,
  kSpinorFull,
  kQuadWithSpinor,
  kFundFull,
};

const char* family_name(LaxFamily f);
LaxFamily parse_family(const std::string& name);

struct LaxSpec {
  LaxFamily family = LaxFamily::kSpinorDegenerate;
  int rank = 3;
  std::vector<int> signs;                       // B(alpha) conjugation, empty = none
  std::optional<std::pair<int, int>> swap;      // Btilde_ij conjugation
  std::optional<Rational> s;                    // empty = symbolic s
  std::optional<Rational> n;                    // empty = symbolic n
  std::uint8_t reg = 0;

  // Throws kInvalidArgument on an inconsistent spec.
  void validate() const;
  std::string to_json() const;
  static LaxSpec from_json(const std::string& text);
  bool operator==(const LaxSpec&) const = default;
};

// z x y u s n t1..t5: the ring every catalog object lives in.
RingPtr standard_ring();

std::vector<ModeLabel> spinor_modes(int r, std::uint8_t reg);
std::vector<ModeLabel> vector_modes(int r, std::uint8_t reg);
std::vector<ModeLabel> lax_modes(const LaxSpec& spec);
// Context over the standard ring with exactly the modes of the given specs
// (concatenated in order).
ContextPtr make_context(const std::vector<std::vector<ModeLabel>>& groups);
ContextPtr lax_context(const LaxSpec& spec);

// Spectral argument given as a polynomial (e.g. z, z - s, x - y).
OpMatrix build_lax(const LaxSpec& spec, const ContextPtr& ctx, const MultiPoly& arg);
OpMatrix build_lax(const LaxSpec& spec, const ContextPtr& ctx, const std::string& var = "z");
// Product of the printed factors (unipotent x core x unipotent) where the
// family has one; d3-level2 is e^{M+} M0 e^{M-}.
OpMatrix build_lax_factorized(const LaxSpec& spec, const ContextPtr& ctx, const MultiPoly& arg);

// Blocks used by several families. Rank m, given register; dense r x r in
// display (position) order.
struct SpinorBlocks {
  std::vector<std::vector<AlgebraElement>> abar;  // Abar
  std::vector<std::vector<AlgebraElement>> a;     // A
};
SpinorBlocks spinor_blocks(const ContextPtr& ctx, int m, std::uint8_t reg);

enum class GKind { kSpinor, kQuad, kFund };
// Register-2 G matrix of the given kind for rank r.
OpMatrix build_G(GKind kind, const ContextPtr& ctx, int r, std::uint8_t reg = 2);

// ---- twists ----

// Monomial prod_i t_i^{c_i}.
struct Charge {
  std::vector<int> c;
  Charge() = default;
  explicit Charge(int r) : c(static_cast<std::size_t>(r), 0) {}
  Charge& operator+=(const Charge& o);
  Charge operator-() const;
  bool is_trivial() const;
  bool operator==(const Charge&) const = default;
};

// Fundamental twist D = diag(t_r^-1 .. t_1^-1, t_1 .. t_r) as per-index charges.
std::vector<Charge> fundamental_twist_charges(int r);
// Mode weights: spinor D_s gives t_i t_j on mode (i,-j); D_f gives t_r t_k on
// vector mode +k and t_r / t_k on -k.
std::map<int, Charge> mode_twist_charges(const ContextPtr& ctx, int r, bool fundamental);

Rational evaluate_charge(const Charge& ch, const std::vector<Rational>& twists);
// Polynomial form (requires nonnegative exponents), variables t1..tr.
MultiPoly charge_polynomial(const Charge& ch, const RingPtr& ring);

OpMatrix build_twist_D(const ContextPtr& ctx, const std::vector<Rational>& twists);
std::map<int, Rational> mode_weights(const ContextPtr& ctx, int r, bool fundamental,
                                     const std::vector<Rational>& twists);

// ---- limits ----

struct LimitResult {
  OpMatrix limit;       // order-0 coefficient in 1/s (resp. 1/n)
  OpMatrix correction;  // next order, must be nonzero
};

// Spinor: s * L_s(z - s) diag(I, -I/(2s)) expanded in s; fundamental:
// n^2 * Ln(z + x1)/n diag(n, -I, 1/n). Positive powers beyond the leading one
// raise kStructural.
LimitResult scaled_limit(LaxFamily family, int r, const ContextPtr& ctx);

// Renames modes: maps every mode of e's context to target through the mode
// map (source id -> target id). Ring must be the same.
AlgebraElement relabel(const AlgebraElement& e, const ContextPtr& target, const std::map<int, int>& mode_map);
OpMatrix relabel(const OpMatrix& m, const ContextPtr& target, const std::map<int, int>& mode_map);

}  // namespace osclax
