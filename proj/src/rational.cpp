#include "osclax/rational.hpp"

#include <cmath>
#include <sstream>

#include "osclax/error.hpp"

namespace osclax {

namespace {

// Inline representation is limited so that sums of two cross products never
// overflow __int128.
constexpr std::int64_t kSmallLimit = std::int64_t{1} << 62;

bool fits_small(__int128 v) { return v < kSmallLimit && v > -kSmallLimit; }

unsigned __int128 gcd_u128(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    if (a < (std::uint64_t(-1)) && b < (std::uint64_t(-1))) {
      std::uint64_t x = static_cast<std::uint64_t>(a);
      std::uint64_t y = static_cast<std::uint64_t>(b);
      while (y != 0) {
        std::uint64_t t = x % y;
        x = y;
        y = t;
      }
      return x;
    }
    unsigned __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

void set_mpz_i128(mpz_class& out, __int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  std::uint64_t hi = static_cast<std::uint64_t>(u >> 64);
  std::uint64_t lo = static_cast<std::uint64_t>(u);
  mpz_class h;
  mpz_import(h.get_mpz_t(), 1, 1, sizeof(hi), 0, 0, &hi);
  mpz_class l;
  mpz_import(l.get_mpz_t(), 1, 1, sizeof(lo), 0, 0, &lo);
  out = (h << 64) + l;
  if (neg) out = -out;
}

}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kContextMismatch: return "context_mismatch";
    case ErrorCode::kDivergentTrace: return "divergent_trace";
    case ErrorCode::kNotHomomorphic: return "not_homomorphic";
    case ErrorCode::kStructural: return "structural_failure";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kParse: return "parse_error";
  }
  return "unknown";
}

Rational::Rational(long long n) {
  if (fits_small(n)) {
    num_ = n;
  } else {
    assign_big(mpq_class(mpz_class(std::to_string(n))));
  }
}

Rational::Rational(long long n, long long d) {
  require(d != 0, ErrorCode::kInvalidArgument, "Rational: zero denominator");
  *this = from_i128(n, d);
}

Rational::Rational(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  assign_big(c);
}

void Rational::assign_big(const mpq_class& q) {
  // Same bound as fits_small(): |v| < 2^62.
  if (mpz_sizeinbase(q.get_num_mpz_t(), 2) <= 62 &&
      mpz_sizeinbase(q.get_den_mpz_t(), 2) <= 62) {
    num_ = mpz_get_si(q.get_num_mpz_t());
    den_ = mpz_get_si(q.get_den_mpz_t());
    big_.reset();
    return;
  }
  num_ = 0;
  den_ = 1;
  big_ = std::make_shared<const mpq_class>(q);
}

Rational Rational::from_i128(__int128 n, __int128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Rational r;
  if (n == 0) return r;
  unsigned __int128 un = n < 0 ? static_cast<unsigned __int128>(-n)
                               : static_cast<unsigned __int128>(n);
  unsigned __int128 g = gcd_u128(un, static_cast<unsigned __int128>(d));
  if (g > 1) {
    n /= static_cast<__int128>(g);
    d /= static_cast<__int128>(g);
  }
  if (fits_small(n) && fits_small(d)) {
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }
  mpz_class zn, zd;
  set_mpz_i128(zn, n);
  set_mpz_i128(zd, d);
  mpq_class q(zn, zd);
  q.canonicalize();
  r.assign_big(q);
  return r;
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  };
  trim(s);
  if (s.empty()) fail(ErrorCode::kParse, "empty rational");
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string ns = slash == std::string::npos ? s : s.substr(0, slash);
  std::string ds = slash == std::string::npos ? "1" : s.substr(slash + 1);
  trim(ns);
  trim(ds);
  if (!valid_int(ns) || !valid_int(ds)) fail(ErrorCode::kParse, "malformed rational '" + s + "'");
  if (ns[0] == '+') ns.erase(ns.begin());
  if (ds[0] == '+') ds.erase(ds.begin());
  mpz_class zn(ns), zd(ds);
  if (zd == 0) fail(ErrorCode::kParse, "zero denominator in '" + s + "'");
  mpq_class q(zn, zd);
  q.canonicalize();
  return Rational(q);
}

bool Rational::is_integer() const {
  if (big_) return mpz_cmp_ui(big_->get_den_mpz_t(), 1) == 0;
  return den_ == 1;
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
  return q;
}

double Rational::to_double() const {
  if (big_) return big_->get_d();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

Rational Rational::operator-() const {
  Rational r(*this);
  if (big_) {
    r.assign_big(-*big_);
  } else {
    r.num_ = -num_;
  }
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (den_ == 1 && o.den_ == 1) {
      __int128 s = static_cast<__int128>(num_) + o.num_;
      if (fits_small(s)) {
        num_ = static_cast<std::int64_t>(s);
        return *this;
      }
    }
    __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    *this = from_i128(n, d);
    return *this;
  }
  assign_big(to_mpq() + o.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (num_ == 0 || o.num_ == 0) {
      num_ = 0;
      den_ = 1;
      return *this;
    }
    if (den_ == 1 && o.den_ == 1) {
      __int128 p = static_cast<__int128>(num_) * o.num_;
      if (fits_small(p)) {
        num_ = static_cast<std::int64_t>(p);
        return *this;
      }
    }
    *this = from_i128(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
    return *this;
  }
  assign_big(to_mpq() * o.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  require(!o.is_zero(), ErrorCode::kInvalidArgument, "Rational: division by zero");
  return *this *= o.inverse();
}

Rational Rational::inverse() const {
  require(!is_zero(), ErrorCode::kInvalidArgument, "Rational: inverse of zero");
  if (big_) {
    mpq_class q = 1 / *big_;
    return Rational(q);
  }
  Rational r;
  r.num_ = num_ < 0 ? -den_ : den_;
  r.den_ = num_ < 0 ? -num_ : num_;
  return r;
}

Rational Rational::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  Rational result(1);
  Rational base(*this);
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical forms: a big value never equals a small one
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

std::string Rational::numerator_str() const {
  if (big_) return big_->get_num().get_str();
  return std::to_string(num_);
}

std::string Rational::denominator_str() const {
  if (big_) return big_->get_den().get_str();
  return std::to_string(den_);
}

std::string Rational::str() const {
  if (is_integer()) return numerator_str();
  return numerator_str() + "/" + denominator_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

Rational factorial(int n) {
  Rational r(1);
  for (int k = 2; k <= n; ++k) r *= Rational(k);
  return r;
}

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  Rational r(1);
  for (int i = 1; i <= k; ++i) r = r * Rational(n - k + i) / Rational(i);
  return r;
}

}  // namespace osclax
