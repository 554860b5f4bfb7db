#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "osclax/rational.hpp"

namespace osclax {

inline constexpr int kMaxVars = 16;

// Polynomial ring context: an ordered list of variable names fixed at
// construction. Polynomials from different rings never mix.
class Ring {
 public:
  static std::shared_ptr<const Ring> make(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& names() const { return names_; }
  bool has(const std::string& name) const { return find(name) >= 0; }
  int find(const std::string& name) const;
  // Throws kContextMismatch when the variable was not declared.
  int index(const std::string& name) const;

  bool same_as(const Ring& o) const { return this == &o || names_ == o.names_; }

 private:
  explicit Ring(std::vector<std::string> names) : names_(std::move(names)) {}
  std::vector<std::string> names_;
};

using RingPtr = std::shared_ptr<const Ring>;

struct Exponent {
  std::array<std::uint8_t, kMaxVars> e{};
  std::uint16_t degree = 0;

  Exponent operator+(const Exponent& o) const;
  bool operator==(const Exponent& o) const { return e == o.e; }
  // Graded lexicographic; the first ring variable is the most significant.
  bool operator<(const Exponent& o) const {
    if (degree != o.degree) return degree < o.degree;
    return e < o.e;
  }
};

class MultiPoly {
 public:
  struct Term {
    Exponent exp;
    Rational coef;
  };

  MultiPoly() = default;
  explicit MultiPoly(RingPtr ring) : ring_(std::move(ring)) {}
  MultiPoly(RingPtr ring, const Rational& c);

  static MultiPoly var(const RingPtr& ring, const std::string& name);
  static MultiPoly var(const RingPtr& ring, int index);
  static MultiPoly monomial(const RingPtr& ring, const Exponent& exp, const Rational& c);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;

  int degree(int var) const;
  int total_degree() const;
  // Coefficient of var^k, as a polynomial in the remaining variables.
  MultiPoly coeff(int var, int k) const;
  MultiPoly subs(int var, const MultiPoly& value) const;
  MultiPoly subs(int var, const Rational& value) const;
  Rational evaluate(const std::map<int, Rational>& values) const;
  // Re-express in another ring that declares every variable actually used.
  MultiPoly to_ring(const RingPtr& target) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& c);

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

  MultiPoly pow(int e) const;

  // Canonical text: terms joined by " + ", each "<rational>[*var^k...]".
  std::string str() const;

  // Adds c*x^exp; keeps canonical order.
  void add_term(const Exponent& exp, const Rational& c);

 private:
  void check_ring(const MultiPoly& o) const;
  void normalize(std::vector<Term>& raw);

  RingPtr ring_;
  std::vector<Term> terms_;  // ascending grlex, no zero coefficients
};

std::ostream& operator<<(std::ostream& os, const MultiPoly& p);

// Quotient of polynomials, compared by cross-multiplication. No gcd
// cancellation is attempted.
class RationalFunction {
 public:
  RationalFunction() : den_(nullptr, Rational(1)) {}
  explicit RationalFunction(MultiPoly num);
  RationalFunction(MultiPoly num, MultiPoly den);

  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }

  RationalFunction operator-() const { return {-num_, den_}; }
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b);

  bool is_zero() const { return num_.is_zero(); }
  Rational evaluate(const std::map<int, Rational>& values) const;
  std::string str() const;

 private:
  MultiPoly num_;
  MultiPoly den_;
};

}  // namespace osclax
