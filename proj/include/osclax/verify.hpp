#pragma once

#include <string>

#include "osclax/lax.hpp"
#include "osclax/report.hpp"

namespace osclax {

// R(x-y) (L(x) (x) I)(I (x) L(y)) = (I (x) L(y))(L(x) (x) I) R(x-y). L is a
// polynomial in `var`; x and y must not occur in it.
CheckReport check_rtt(const OpMatrix& l, const std::string& var = "z", const std::string& params = "{}");

// Componentwise Yangian relation multiplied through by (x-y)(x-y+kappa).
CheckReport check_yangian_components(const OpMatrix& l, const std::string& var = "z",
                                     const std::string& params = "{}");

// Closed forms of L^t(x) J L(y) and L(y) J L^t(x) for spinor-degenerate L.
CheckReport check_spinor_products(int r);

// [R(z), B (x) B] = 0 and B B' = I.
CheckReport check_invariance(const OpMatrix& b, const std::string& params = "{}");

enum class RepKind { kSpinor, kFundamental };

struct QuadraticGenerators {
  GeneratorSet F;  // z^1 coefficients
  GeneratorSet G;  // z^0 coefficients
};
// L = z^2 I + z E_ab F_ba + E_ab G_ba; kStructural otherwise.
QuadraticGenerators extract_quadratic_generators(const OpMatrix& l, int var);

// Generator matrix with entry (a, b) = F_ab.
OpMatrix generator_matrix(const GeneratorSet& g);

// Spinor: (F + s)(F - s - kappa) = 0 with generators of spinor-full (symbolic
// s). Fundamental: (F - 1)(F + n)(F - n - 2 kappa) = 0 from fund-full at s = 0.
CheckReport check_characteristic(RepKind rep, int r);
CheckReport check_characteristic(RepKind rep, const GeneratorSet& f, const std::string& params = "{}");

// G_ab = 1/2 F_cb F_ac + kappa/2 F_ab - 1/4((kappa-1)^2 + 2 kappa n + n^2) delta_ab
// for fund-full at s = 0. drop_kappa_term removes the kappa/2 F term (mutation).
CheckReport check_G_relation(int r, bool drop_kappa_term = false);

enum class FactorizationId { kSpinor, kQuad, kFund };
const char* factorization_name(FactorizationId id);

// Exponent Y and the shift rules x -> exp(Y) x exp(-Y) used by the
// factorization identities.
struct FactorizationShift {
  ContextPtr ctx;
  AlgebraElement exponent;
  SubstitutionRules rules;
};
FactorizationShift factorization_shift(FactorizationId id, int r);

// Product of two Lax matrices against the S-conjugated core times G. The
// conjugation is the substitution given by the shift rules; the rules are also
// compared with the adjoint series of the exponent. shift_perturbation is
// added to both spectral shifts of the left side (mutation).
CheckReport check_factorization(FactorizationId id, int r, const Rational& shift_perturbation = Rational(0));

// [F_ab, F_cd] = d_cb F_ad - d_ad F_cb - d_{c,-a} F_{-b,d} + d_{d,-b} F_{c,-a}.
CheckReport check_so2r_relations(const GeneratorSet& f, const std::string& params = "{}");

// S e S^{-1} component formulas, S K S^{-1} = Q, and antisymmetry plus
// commutation relations of the M generators taken from spinor-full.
CheckReport check_appendix(int r);

// Scaled limits of spinor-full and fund-full against the degenerate families.
CheckReport check_limit(RepKind rep, int r);

// F_ab |0> = 0 for a < b and F_ii |0> = -s |0> (i > 0) for spinor-full,
// checked in the truncated Fock representation at s = s_value.
CheckReport check_weight_action(int r, const Rational& s_value = Rational(3, 2));

// Each family equals the product of its printed factors.
CheckReport check_factor_consistency(const LaxSpec& spec);

// spinor-degenerate at r = 3 against d3-level3 under s(1,-3)->a1, s(2,-3)->a2,
// s(1,-2)->a3. swapped exchanges the first two (mutation).
CheckReport check_d3_dictionary(bool swapped = false);

// Mutation: negates entry (row, col) of L.
OpMatrix mutate_negate_entry(const OpMatrix& l, int row, int col);

}  // namespace osclax
