#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace osclax {

// Exact rational number. Values that fit a signed 62-bit numerator/denominator
// are kept inline; anything larger spills into a shared immutable mpq_class.
class Rational {
 public:
  Rational() = default;
  Rational(long long n);  // NOLINT(google-explicit-constructor)
  Rational(long long n, long long d);
  explicit Rational(const mpq_class& q);

  static Rational parse(std::string_view text);

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const;
  int sign() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  Rational inverse() const;
  Rational pow(int e) const;

  mpq_class to_mpq() const;
  double to_double() const;
  std::string str() const;

  // Numerator/denominator as decimal strings (denominator is positive).
  std::string numerator_str() const;
  std::string denominator_str() const;

 private:
  void assign_big(const mpq_class& q);
  static Rational from_i128(__int128 n, __int128 d);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

Rational factorial(int n);
Rational binomial(int n, int k);

}  // namespace osclax
