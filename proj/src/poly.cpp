#include "osclax/poly.hpp"

#include <algorithm>
#include <sstream>

#include "osclax/error.hpp"

namespace osclax {

std::shared_ptr<const Ring> Ring::make(std::vector<std::string> names) {
  require(static_cast<int>(names.size()) <= kMaxVars, ErrorCode::kInvalidArgument,
          "Ring: too many variables");
  for (std::size_t i = 0; i < names.size(); ++i) {
    require(!names[i].empty(), ErrorCode::kInvalidArgument, "Ring: empty variable name");
    for (std::size_t j = 0; j < i; ++j)
      require(names[i] != names[j], ErrorCode::kInvalidArgument,
              "Ring: duplicate variable '" + names[i] + "'");
  }
  return std::shared_ptr<const Ring>(new Ring(std::move(names)));
}

int Ring::find(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

int Ring::index(const std::string& name) const {
  int i = find(name);
  require(i >= 0, ErrorCode::kContextMismatch, "variable '" + name + "' not declared in ring");
  return i;
}

Exponent Exponent::operator+(const Exponent& o) const {
  Exponent r;
  for (int i = 0; i < kMaxVars; ++i) {
    unsigned s = unsigned(e[i]) + unsigned(o.e[i]);
    require(s <= 255, ErrorCode::kInvalidArgument, "exponent overflow");
    r.e[i] = static_cast<std::uint8_t>(s);
  }
  r.degree = static_cast<std::uint16_t>(degree + o.degree);
  return r;
}

MultiPoly::MultiPoly(RingPtr ring, const Rational& c) : ring_(std::move(ring)) {
  if (!c.is_zero()) terms_.push_back({Exponent{}, c});
}

MultiPoly MultiPoly::var(const RingPtr& ring, const std::string& name) {
  return var(ring, ring->index(name));
}

MultiPoly MultiPoly::var(const RingPtr& ring, int index) {
  require(index >= 0 && index < ring->size(), ErrorCode::kContextMismatch, "variable index out of range");
  Exponent e;
  e.e[static_cast<std::size_t>(index)] = 1;
  e.degree = 1;
  return monomial(ring, e, Rational(1));
}

MultiPoly MultiPoly::monomial(const RingPtr& ring, const Exponent& exp, const Rational& c) {
  MultiPoly p(ring);
  if (!c.is_zero()) p.terms_.push_back({exp, c});
  return p;
}

void MultiPoly::check_ring(const MultiPoly& o) const {
  if (ring_ && o.ring_ && !ring_->same_as(*o.ring_))
    fail(ErrorCode::kContextMismatch, "polynomials from different rings");
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exp.degree == 0);
}

Rational MultiPoly::constant_term() const {
  if (!terms_.empty() && terms_[0].exp.degree == 0) return terms_[0].coef;
  return Rational(0);
}

int MultiPoly::degree(int var) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max<int>(d, t.exp.e[static_cast<std::size_t>(var)]);
  return terms_.empty() ? -1 : d;
}

int MultiPoly::total_degree() const {
  return terms_.empty() ? -1 : terms_.back().exp.degree;
}

MultiPoly MultiPoly::coeff(int var, int k) const {
  MultiPoly r(ring_);
  std::vector<Term> raw;
  for (const auto& t : terms_) {
    if (t.exp.e[static_cast<std::size_t>(var)] == k) {
      Term u = t;
      u.exp.e[static_cast<std::size_t>(var)] = 0;
      u.exp.degree = static_cast<std::uint16_t>(u.exp.degree - k);
      raw.push_back(std::move(u));
    }
  }
  r.normalize(raw);
  return r;
}

MultiPoly MultiPoly::subs(int var, const MultiPoly& value) const {
  check_ring(value);
  int d = degree(var);
  if (d <= 0) return *this;
  std::vector<MultiPoly> powers;
  powers.reserve(static_cast<std::size_t>(d) + 1);
  powers.emplace_back(ring_, Rational(1));
  for (int k = 1; k <= d; ++k) powers.push_back(powers.back() * value);
  MultiPoly out(ring_);
  for (int k = 0; k <= d; ++k) {
    MultiPoly c = coeff(var, k);
    if (!c.is_zero()) out += c * powers[static_cast<std::size_t>(k)];
  }
  return out;
}

MultiPoly MultiPoly::subs(int var, const Rational& value) const {
  std::vector<Term> raw;
  raw.reserve(terms_.size());
  for (const auto& t : terms_) {
    int k = t.exp.e[static_cast<std::size_t>(var)];
    Term u = t;
    if (k) {
      u.coef *= value.pow(k);
      u.exp.e[static_cast<std::size_t>(var)] = 0;
      u.exp.degree = static_cast<std::uint16_t>(u.exp.degree - k);
    }
    raw.push_back(std::move(u));
  }
  MultiPoly r(ring_);
  r.normalize(raw);
  return r;
}

Rational MultiPoly::evaluate(const std::map<int, Rational>& values) const {
  Rational acc(0);
  for (const auto& t : terms_) {
    Rational m = t.coef;
    for (int i = 0; i < kMaxVars; ++i) {
      int k = t.exp.e[static_cast<std::size_t>(i)];
      if (!k) continue;
      auto it = values.find(i);
      require(it != values.end(), ErrorCode::kInvalidArgument,
              "evaluate: no value for variable '" + ring_->name(i) + "'");
      m *= it->second.pow(k);
    }
    acc += m;
  }
  return acc;
}

MultiPoly MultiPoly::to_ring(const RingPtr& target) const {
  if (ring_ && ring_->same_as(*target)) {
    MultiPoly r(*this);
    r.ring_ = target;
    return r;
  }
  std::vector<Term> raw;
  for (const auto& t : terms_) {
    Term u{Exponent{}, t.coef};
    for (int i = 0; i < kMaxVars; ++i) {
      int k = t.exp.e[static_cast<std::size_t>(i)];
      if (!k) continue;
      int j = target->index(ring_->name(i));
      u.exp.e[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(k);
    }
    u.exp.degree = t.exp.degree;
    raw.push_back(std::move(u));
  }
  MultiPoly r(target);
  r.normalize(raw);
  return r;
}

void MultiPoly::normalize(std::vector<Term>& raw) {
  std::sort(raw.begin(), raw.end(),
            [](const Term& a, const Term& b) { return a.exp < b.exp; });
  terms_.clear();
  terms_.reserve(raw.size());
  for (auto& t : raw) {
    if (!terms_.empty() && terms_.back().exp == t.exp) {
      terms_.back().coef += t.coef;
      if (terms_.back().coef.is_zero()) terms_.pop_back();
    } else if (!t.coef.is_zero()) {
      terms_.push_back(std::move(t));
    }
  }
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_ring(o);
  if (!ring_) ring_ = o.ring_;
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) {
    terms_ = o.terms_;
    return *this;
  }
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].exp < o.terms_[j].exp)) {
      merged.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || o.terms_[j].exp < terms_[i].exp) {
      merged.push_back(o.terms_[j++]);
    } else {
      Rational c = terms_[i].coef + o.terms_[j].coef;
      if (!c.is_zero()) merged.push_back({terms_[i].exp, std::move(c)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) { return *this += -o; }

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) {
  *this = *this * o;
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  if (c.is_one()) return *this;
  for (auto& t : terms_) t.coef *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_ring(b);
  MultiPoly r(a.ring_ ? a.ring_ : b.ring_);
  if (a.terms_.empty() || b.terms_.empty()) return r;
  if (b.is_constant()) return a * b.terms_[0].coef;
  if (a.is_constant()) return b * a.terms_[0].coef;
  std::vector<MultiPoly::Term> raw;
  raw.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) raw.push_back({s.exp + t.exp, s.coef * t.coef});
  r.normalize(raw);
  return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (a.terms_.empty()) return true;
  a.check_ring(b);
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].exp == b.terms_[i].exp) || !(a.terms_[i].coef == b.terms_[i].coef)) return false;
  return true;
}

MultiPoly MultiPoly::pow(int e) const {
  require(e >= 0, ErrorCode::kInvalidArgument, "negative polynomial power");
  MultiPoly r(ring_, Rational(1));
  for (int k = 0; k < e; ++k) r *= *this;
  return r;
}

void MultiPoly::add_term(const Exponent& exp, const Rational& c) {
  if (c.is_zero()) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                             [](const Term& t, const Exponent& x) { return t.exp < x; });
  if (it != terms_.end() && it->exp == exp) {
    it->coef += c;
    if (it->coef.is_zero()) terms_.erase(it);
  } else {
    terms_.insert(it, Term{exp, c});
  }
}

std::string MultiPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << it->coef.str();
    for (int i = 0; i < kMaxVars; ++i) {
      int k = it->exp.e[static_cast<std::size_t>(i)];
      if (!k) continue;
      os << "*" << ring_->name(i);
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const MultiPoly& p) { return os << p.str(); }

RationalFunction::RationalFunction(MultiPoly num) : num_(std::move(num)) {
  den_ = MultiPoly(num_.ring(), Rational(1));
}

RationalFunction::RationalFunction(MultiPoly num, MultiPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
  require(!den_.is_zero(), ErrorCode::kInvalidArgument, "RationalFunction: zero denominator");
  if (num_.is_zero()) den_ = MultiPoly(den_.ring(), Rational(1));
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  require(!b.is_zero(), ErrorCode::kInvalidArgument, "RationalFunction: division by zero");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
  return a.num_ * b.den_ == b.num_ * a.den_;
}

Rational RationalFunction::evaluate(const std::map<int, Rational>& values) const {
  Rational d = den_.evaluate(values);
  require(!d.is_zero(), ErrorCode::kInvalidArgument, "RationalFunction: pole at evaluation point");
  return num_.evaluate(values) / d;
}

std::string RationalFunction::str() const {
  if (den_.is_constant() && den_.constant_term().is_one()) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace osclax
