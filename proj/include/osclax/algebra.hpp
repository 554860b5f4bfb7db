#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "osclax/poly.hpp"

namespace osclax {

// Oscillator mode label. reg is the register tag (0 = none, 1, 2); family is
// a one-letter tag ('s' spinor pairs (i,-j), 'v' vector modes +-k, 'a' the
// plain D3 modes); i, j index the mode (j = 0 for single-index families).
struct ModeLabel {
  std::uint8_t reg = 0;
  char family = 'a';
  std::int16_t i = 0;
  std::int16_t j = 0;

  std::string name() const;
  static ModeLabel parse(std::string_view text);
  auto operator<=>(const ModeLabel&) const = default;
};

class ModeSpace {
 public:
  static std::shared_ptr<const ModeSpace> make(std::vector<ModeLabel> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  const ModeLabel& label(int id) const { return labels_.at(static_cast<std::size_t>(id)); }
  const std::vector<ModeLabel>& labels() const { return labels_; }
  int find(const ModeLabel& l) const;
  // Throws kContextMismatch for an undeclared mode.
  int index(const ModeLabel& l) const;
  bool same_as(const ModeSpace& o) const { return this == &o || labels_ == o.labels_; }

 private:
  explicit ModeSpace(std::vector<ModeLabel> labels) : labels_(std::move(labels)) {}
  std::vector<ModeLabel> labels_;
};

using ModeSpacePtr = std::shared_ptr<const ModeSpace>;

struct AlgebraContext {
  RingPtr ring;
  ModeSpacePtr modes;

  static std::shared_ptr<const AlgebraContext> make(RingPtr ring, ModeSpacePtr modes);
  bool same_as(const AlgebraContext& o) const {
    return this == &o || (ring->same_as(*o.ring) && modes->same_as(*o.modes));
  }
};

using ContextPtr = std::shared_ptr<const AlgebraContext>;

// Normal-ordered monomial  prod_m ad_m^p a_m^q, modes ascending.
class OscMonomial {
 public:
  struct Factor {
    int mode;
    int p;
    int q;
  };

  OscMonomial() = default;
  static OscMonomial single(int mode, int p, int q);

  bool is_unit() const { return packed_.empty(); }
  std::size_t size() const { return packed_.size(); }
  Factor factor(std::size_t k) const {
    std::uint32_t v = packed_[k];
    return {static_cast<int>(v >> 16), static_cast<int>((v >> 8) & 0xff), static_cast<int>(v & 0xff)};
  }
  std::vector<Factor> factors() const;
  // Powers of one mode, (0, 0) when absent.
  std::pair<int, int> powers(int mode) const;
  int creation_degree() const;
  int annihilation_degree() const;
  bool is_balanced() const;  // p == q for every mode

  // Builder: appends a factor; modes must come strictly ascending.
  void push(int mode, int p, int q);

  const std::vector<std::uint32_t>& packed() const { return packed_; }
  bool operator==(const OscMonomial& o) const { return packed_ == o.packed_; }
  bool operator<(const OscMonomial& o) const;

 private:
  std::vector<std::uint32_t> packed_;
  int degree_ = 0;
};

class AlgebraElement {
 public:
  using TermMap = std::map<OscMonomial, MultiPoly>;

  AlgebraElement() = default;
  explicit AlgebraElement(ContextPtr ctx) : ctx_(std::move(ctx)) {}
  AlgebraElement(ContextPtr ctx, const MultiPoly& scalar);
  AlgebraElement(ContextPtr ctx, const Rational& scalar);

  static AlgebraElement monomial(ContextPtr ctx, const OscMonomial& m, const MultiPoly& coef);
  static AlgebraElement creation(ContextPtr ctx, int mode, int power = 1);
  static AlgebraElement annihilation(ContextPtr ctx, int mode, int power = 1);
  static AlgebraElement variable(ContextPtr ctx, const std::string& name);

  const ContextPtr& context() const { return ctx_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_scalar() const;
  MultiPoly scalar_part() const;
  // Total number of (polynomial term, monomial) pairs.
  std::size_t term_count() const;

  AlgebraElement operator-() const;
  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(const Rational& c);
  AlgebraElement& operator*=(const MultiPoly& c);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(AlgebraElement a, const Rational& c) { return a *= c; }
  friend AlgebraElement operator*(const Rational& c, AlgebraElement a) { return a *= c; }
  friend AlgebraElement operator*(AlgebraElement a, const MultiPoly& c) { return a *= c; }
  friend AlgebraElement operator*(const MultiPoly& c, AlgebraElement a) { return a *= c; }
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);

  void add_term(const OscMonomial& m, const MultiPoly& coef);

  // Coefficient-wise operations on the polynomial part.
  AlgebraElement map_coefficients(const std::function<MultiPoly(const MultiPoly&)>& f) const;
  AlgebraElement subs(int var, const MultiPoly& value) const;
  AlgebraElement subs(int var, const Rational& value) const;
  AlgebraElement coeff(int var, int k) const;
  int degree(int var) const;
  // Maximal oscillator degree (sum of p+q) over terms.
  int osc_degree() const;
  // Modes that occur in some term.
  std::vector<int> modes_used() const;

  // <0| e |0> over the given modes: keeps only terms in which those modes are
  // absent. Result lives in the same context.
  AlgebraElement vacuum_expectation(const std::vector<int>& modes) const;

  std::string str() const;
  static AlgebraElement parse(ContextPtr ctx, std::string_view text);

 private:
  void check_context(const AlgebraElement& o) const;
  void adopt_context(const AlgebraElement& o);

  ContextPtr ctx_;
  TermMap terms_;
};

std::ostream& operator<<(std::ostream& os, const AlgebraElement& e);

AlgebraElement wick_multiply(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement power(const AlgebraElement& a, int e);

// Closed-form regularised trace  tr(prod_m w_m^{N_m} e). Every mode of the
// context with a weight takes part; modes used by e must have one.
RationalFunction twisted_trace(const AlgebraElement& e, const std::map<int, MultiPoly>& weights);

// Same trace with rational weights. With normalized = true the result is
// divided by prod_m 1/(1 - w_m), i.e. the trace of the identity is 1.
MultiPoly twisted_trace_numeric(const AlgebraElement& e, const std::map<int, Rational>& weights,
                                bool normalized);
Rational trace_normalization(const std::map<int, Rational>& weights);

// Images of the generators a_m and ad_m. Missing modes map to themselves.
struct SubstitutionRules {
  std::map<int, AlgebraElement> annihilation;
  std::map<int, AlgebraElement> creation;
};

struct HomomorphismViolation {
  std::string left;
  std::string right;
  std::string residual;
};

// Checks that the images reproduce [a_m, ad_n] = delta_mn and the vanishing
// commutators on every generator pair of the context.
std::optional<HomomorphismViolation> find_homomorphism_violation(const ContextPtr& ctx,
                                                                const SubstitutionRules& rules);

// Throws kNotHomomorphic (naming the violating pair) when check is set and the
// rules fail the test above.
AlgebraElement substitute(const AlgebraElement& e, const SubstitutionRules& rules, bool check = true);

// exp(Y) x exp(-Y) = sum_k ad_Y^k(x)/k!. The series must terminate within
// max_order steps, otherwise kStructural.
AlgebraElement ad_conjugate(const AlgebraElement& y, const AlgebraElement& x, int max_order = 64);

}  // namespace osclax
