#include "osclax/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "osclax/error.hpp"

namespace osclax {

// ---- labels and contexts ----

std::string ModeLabel::name() const {
  std::string s;
  if (reg) s += std::to_string(reg) + ":";
  s += family;
  s += std::to_string(i);
  if (j) s += "," + std::to_string(j);
  return s;
}

ModeLabel ModeLabel::parse(std::string_view text) {
  ModeLabel l;
  std::string s(text);
  auto colon = s.find(':');
  if (colon != std::string::npos) {
    l.reg = static_cast<std::uint8_t>(std::stoi(s.substr(0, colon)));
    s = s.substr(colon + 1);
  }
  require(!s.empty() && std::isalpha(static_cast<unsigned char>(s[0])), ErrorCode::kParse,
          "bad mode label '" + std::string(text) + "'");
  l.family = s[0];
  s = s.substr(1);
  auto comma = s.find(',');
  try {
    l.i = static_cast<std::int16_t>(std::stoi(s.substr(0, comma)));
    if (comma != std::string::npos) l.j = static_cast<std::int16_t>(std::stoi(s.substr(comma + 1)));
  } catch (const std::logic_error&) {
    fail(ErrorCode::kParse, "bad mode label '" + std::string(text) + "'");
  }
  return l;
}

ModeSpacePtr ModeSpace::make(std::vector<ModeLabel> labels) {
  require(labels.size() < 65536, ErrorCode::kInvalidArgument, "too many modes");
  for (std::size_t a = 0; a < labels.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      require(!(labels[a] == labels[b]), ErrorCode::kInvalidArgument,
              "duplicate mode " + labels[a].name());
  return std::shared_ptr<const ModeSpace>(new ModeSpace(std::move(labels)));
}

int ModeSpace::find(const ModeLabel& l) const {
  for (std::size_t k = 0; k < labels_.size(); ++k)
    if (labels_[k] == l) return static_cast<int>(k);
  return -1;
}

int ModeSpace::index(const ModeLabel& l) const {
  int k = find(l);
  require(k >= 0, ErrorCode::kContextMismatch, "mode " + l.name() + " not declared");
  return k;
}

ContextPtr AlgebraContext::make(RingPtr ring, ModeSpacePtr modes) {
  auto c = std::make_shared<AlgebraContext>();
  c->ring = std::move(ring);
  c->modes = std::move(modes);
  return c;
}

// ---- monomials ----

OscMonomial OscMonomial::single(int mode, int p, int q) {
  OscMonomial m;
  if (p || q) m.push(mode, p, q);
  return m;
}

void OscMonomial::push(int mode, int p, int q) {
  require(p >= 0 && q >= 0 && p < 256 && q < 256, ErrorCode::kInvalidArgument, "oscillator power out of range");
  if (!p && !q) return;
  require(packed_.empty() || static_cast<int>(packed_.back() >> 16) < mode, ErrorCode::kInvalidArgument,
          "OscMonomial: modes out of order");
  packed_.push_back((static_cast<std::uint32_t>(mode) << 16) | (static_cast<std::uint32_t>(p) << 8) |
                    static_cast<std::uint32_t>(q));
  degree_ += p + q;
}

std::vector<OscMonomial::Factor> OscMonomial::factors() const {
  std::vector<Factor> out;
  out.reserve(packed_.size());
  for (std::size_t k = 0; k < packed_.size(); ++k) out.push_back(factor(k));
  return out;
}

std::pair<int, int> OscMonomial::powers(int mode) const {
  for (std::size_t k = 0; k < packed_.size(); ++k) {
    Factor f = factor(k);
    if (f.mode == mode) return {f.p, f.q};
  }
  return {0, 0};
}

int OscMonomial::creation_degree() const {
  int d = 0;
  for (std::size_t k = 0; k < packed_.size(); ++k) d += factor(k).p;
  return d;
}

int OscMonomial::annihilation_degree() const {
  int d = 0;
  for (std::size_t k = 0; k < packed_.size(); ++k) d += factor(k).q;
  return d;
}

bool OscMonomial::is_balanced() const {
  for (std::size_t k = 0; k < packed_.size(); ++k) {
    Factor f = factor(k);
    if (f.p != f.q) return false;
  }
  return true;
}

bool OscMonomial::operator<(const OscMonomial& o) const {
  if (degree_ != o.degree_) return degree_ < o.degree_;
  return packed_ < o.packed_;
}

// ---- elements ----

AlgebraElement::AlgebraElement(ContextPtr ctx, const MultiPoly& scalar) : ctx_(std::move(ctx)) {
  if (!scalar.is_zero()) terms_.emplace(OscMonomial{}, scalar.ring() ? scalar : scalar.to_ring(ctx_->ring));
}

AlgebraElement::AlgebraElement(ContextPtr ctx, const Rational& scalar) : ctx_(std::move(ctx)) {
  if (!scalar.is_zero()) terms_.emplace(OscMonomial{}, MultiPoly(ctx_->ring, scalar));
}

AlgebraElement AlgebraElement::monomial(ContextPtr ctx, const OscMonomial& m, const MultiPoly& coef) {
  AlgebraElement e(std::move(ctx));
  e.add_term(m, coef);
  return e;
}

AlgebraElement AlgebraElement::creation(ContextPtr ctx, int mode, int power) {
  require(mode >= 0 && mode < ctx->modes->size(), ErrorCode::kContextMismatch, "mode id out of range");
  MultiPoly one(ctx->ring, Rational(1));
  return monomial(ctx, OscMonomial::single(mode, power, 0), one);
}

AlgebraElement AlgebraElement::annihilation(ContextPtr ctx, int mode, int power) {
  require(mode >= 0 && mode < ctx->modes->size(), ErrorCode::kContextMismatch, "mode id out of range");
  MultiPoly one(ctx->ring, Rational(1));
  return monomial(ctx, OscMonomial::single(mode, 0, power), one);
}

AlgebraElement AlgebraElement::variable(ContextPtr ctx, const std::string& name) {
  MultiPoly v = MultiPoly::var(ctx->ring, name);
  return AlgebraElement(std::move(ctx), v);
}

bool AlgebraElement::is_scalar() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
}

MultiPoly AlgebraElement::scalar_part() const {
  auto it = terms_.find(OscMonomial{});
  if (it == terms_.end()) return MultiPoly(ctx_ ? ctx_->ring : nullptr);
  return it->second;
}

std::size_t AlgebraElement::term_count() const {
  std::size_t n = 0;
  for (const auto& [m, c] : terms_) n += c.size();
  return n;
}

void AlgebraElement::check_context(const AlgebraElement& o) const {
  if (ctx_ && o.ctx_ && !ctx_->same_as(*o.ctx_))
    fail(ErrorCode::kContextMismatch, "algebra elements from different contexts");
}

void AlgebraElement::adopt_context(const AlgebraElement& o) {
  check_context(o);
  if (!ctx_) ctx_ = o.ctx_;
}

void AlgebraElement::add_term(const OscMonomial& m, const MultiPoly& coef) {
  if (coef.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement r(*this);
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  adopt_context(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  adopt_context(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, p] : terms_) p *= c;
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(const MultiPoly& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= c;
    if (it->second.is_zero()) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

namespace {

// Expansion coefficient of a^q ad^p = sum_k C(q,k) C(p,k) k! ad^{p-k} a^{q-k}.
long long wick_coefficient(int q, int p, int k) {
  long long c = 1;
  for (int i = 0; i < k; ++i) c = c * (q - i) * (p - i) / (i + 1);
  return c;
}

void multiply_monomials(const OscMonomial& x, const OscMonomial& y,
                        std::vector<std::pair<OscMonomial, long long>>& out) {
  out.clear();
  // Per-mode choices; only shared modes carry more than one.
  std::vector<std::vector<std::pair<OscMonomial::Factor, long long>>> slots;
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x.factor(i).mode < y.factor(j).mode)) {
      slots.push_back({{x.factor(i++), 1}});
    } else if (i == x.size() || y.factor(j).mode < x.factor(i).mode) {
      slots.push_back({{y.factor(j++), 1}});
    } else {
      auto fx = x.factor(i++);
      auto fy = y.factor(j++);
      std::vector<std::pair<OscMonomial::Factor, long long>> opts;
      int kmax = std::min(fx.q, fy.p);
      for (int k = 0; k <= kmax; ++k)
        opts.push_back({{fx.mode, fx.p + fy.p - k, fx.q + fy.q - k}, wick_coefficient(fx.q, fy.p, k)});
      slots.push_back(std::move(opts));
    }
  }
  std::vector<std::size_t> idx(slots.size(), 0);
  while (true) {
    OscMonomial m;
    long long c = 1;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const auto& [f, w] = slots[s][idx[s]];
      m.push(f.mode, f.p, f.q);
      c *= w;
    }
    out.emplace_back(std::move(m), c);
    std::size_t s = 0;
    for (; s < slots.size(); ++s) {
      if (++idx[s] < slots[s].size()) break;
      idx[s] = 0;
    }
    if (s == slots.size()) break;
  }
}

}  // namespace

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  a.check_context(b);
  AlgebraElement r(a.ctx_ ? a.ctx_ : b.ctx_);
  if (a.is_zero() || b.is_zero()) return r;
  std::vector<std::pair<OscMonomial, long long>> expansion;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      MultiPoly c = ca * cb;
      if (c.is_zero()) continue;
      multiply_monomials(ma, mb, expansion);
      for (const auto& [m, w] : expansion) {
        if (w == 1) {
          r.add_term(m, c);
        } else {
          r.add_term(m, c * Rational(w));
        }
      }
    }
  }
  return r;
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (a.terms_.empty()) return true;
  a.check_context(b);
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  for (; i != a.terms_.end(); ++i, ++j)
    if (!(i->first == j->first) || !(i->second == j->second)) return false;
  return true;
}

AlgebraElement AlgebraElement::map_coefficients(const std::function<MultiPoly(const MultiPoly&)>& f) const {
  AlgebraElement r(ctx_);
  for (const auto& [m, c] : terms_) r.add_term(m, f(c));
  return r;
}

AlgebraElement AlgebraElement::subs(int var, const MultiPoly& value) const {
  return map_coefficients([&](const MultiPoly& c) { return c.subs(var, value); });
}

AlgebraElement AlgebraElement::subs(int var, const Rational& value) const {
  return map_coefficients([&](const MultiPoly& c) { return c.subs(var, value); });
}

AlgebraElement AlgebraElement::coeff(int var, int k) const {
  return map_coefficients([&](const MultiPoly& c) { return c.coeff(var, k); });
}

int AlgebraElement::degree(int var) const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, c.degree(var));
  return d;
}

int AlgebraElement::osc_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.creation_degree() + m.annihilation_degree());
  return d;
}

std::vector<int> AlgebraElement::modes_used() const {
  std::vector<int> out;
  for (const auto& [m, c] : terms_)
    for (std::size_t k = 0; k < m.size(); ++k) out.push_back(m.factor(k).mode);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AlgebraElement AlgebraElement::vacuum_expectation(const std::vector<int>& modes) const {
  AlgebraElement r(ctx_);
  for (const auto& [m, c] : terms_) {
    bool keep = true;
    for (int mode : modes) {
      auto pq = m.powers(mode);
      if (pq.first || pq.second) {
        keep = false;
        break;
      }
    }
    if (keep) r.add_term(m, c);
  }
  return r;
}

std::string AlgebraElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string osc;
    for (std::size_t k = 0; k < m.size(); ++k) {
      auto f = m.factor(k);
      if (f.p) osc += " * ad[" + ctx_->modes->label(f.mode).name() + "]^" + std::to_string(f.p);
    }
    for (std::size_t k = 0; k < m.size(); ++k) {
      auto f = m.factor(k);
      if (f.q) osc += " * a[" + ctx_->modes->label(f.mode).name() + "]^" + std::to_string(f.q);
    }
    for (auto it = c.terms().rbegin(); it != c.terms().rend(); ++it) {
      if (!first) os << " + ";
      first = false;
      os << it->coef.str();
      for (int v = 0; v < kMaxVars; ++v) {
        int k = it->exp.e[static_cast<std::size_t>(v)];
        if (k) os << " * " << ctx_->ring->name(v) << "^" << k;
      }
      os << osc;
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const AlgebraElement& e) { return os << e.str(); }

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= s.size(); ++k) {
    if (k == s.size() || s[k] == sep) {
      out.push_back(trim(s.substr(start, k - start)));
      start = k + 1;
    }
  }
  return out;
}

}  // namespace

AlgebraElement AlgebraElement::parse(ContextPtr ctx, std::string_view text) {
  AlgebraElement r(ctx);
  std::string all = trim(text);
  if (all == "0") return r;
  for (const auto& term : split(all, '+')) {
    require(!term.empty(), ErrorCode::kParse, "empty term");
    auto factors = split(term, '*');
    Rational coef = Rational::parse(factors[0]);
    Exponent exp;
    std::map<int, std::pair<int, int>> osc;
    for (std::size_t f = 1; f < factors.size(); ++f) {
      const std::string& tok = factors[f];
      std::string base = tok;
      int power = 1;
      auto caret = tok.rfind('^');
      auto bracket = tok.rfind(']');
      if (caret != std::string::npos && (bracket == std::string::npos || caret > bracket)) {
        base = trim(tok.substr(0, caret));
        try {
          power = std::stoi(tok.substr(caret + 1));
        } catch (const std::logic_error&) {
          fail(ErrorCode::kParse, "bad exponent in '" + tok + "'");
        }
      }
      require(power >= 0, ErrorCode::kParse, "negative exponent in '" + tok + "'");
      bool is_ad = base.rfind("ad[", 0) == 0;
      bool is_a = base.rfind("a[", 0) == 0;
      if (is_ad || is_a) {
        require(base.back() == ']', ErrorCode::kParse, "unterminated mode in '" + tok + "'");
        std::size_t open = base.find('[');
        ModeLabel l = ModeLabel::parse(base.substr(open + 1, base.size() - open - 2));
        int id = ctx->modes->index(l);
        auto& pq = osc[id];
        (is_ad ? pq.first : pq.second) += power;
      } else {
        int v = ctx->ring->index(base);
        unsigned s = exp.e[static_cast<std::size_t>(v)] + static_cast<unsigned>(power);
        require(s < 256, ErrorCode::kParse, "exponent overflow");
        exp.e[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(s);
        exp.degree = static_cast<std::uint16_t>(exp.degree + power);
      }
    }
    OscMonomial m;
    for (const auto& [id, pq] : osc) m.push(id, pq.first, pq.second);
    r.add_term(m, MultiPoly::monomial(ctx->ring, exp, coef));
  }
  return r;
}

AlgebraElement wick_multiply(const AlgebraElement& a, const AlgebraElement& b) { return a * b; }

AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b) { return a * b - b * a; }

AlgebraElement power(const AlgebraElement& a, int e) {
  require(e >= 0, ErrorCode::kInvalidArgument, "negative power");
  AlgebraElement r(a.context(), Rational(1));
  for (int k = 0; k < e; ++k) r = r * a;
  return r;
}

// ---- traces ----

RationalFunction twisted_trace(const AlgebraElement& e, const std::map<int, MultiPoly>& weights) {
  const auto& ctx = e.context();
  require(ctx != nullptr, ErrorCode::kInvalidArgument, "twisted_trace: element without context");
  for (int m : e.modes_used())
    require(weights.count(m) > 0, ErrorCode::kInvalidArgument,
            "twisted_trace: no weight for mode " + ctx->modes->label(m).name());
  MultiPoly one(ctx->ring, Rational(1));
  for (const auto& [m, w] : weights)
    require(!(w == one), ErrorCode::kDivergentTrace,
            "twisted_trace: weight 1 on mode " + ctx->modes->label(m).name());

  // Largest balanced power per mode fixes the common denominator.
  std::map<int, int> top;
  for (const auto& [m, w] : weights) top[m] = 0;
  for (const auto& [mono, c] : e.terms()) {
    if (!mono.is_balanced()) continue;
    for (const auto& f : mono.factors()) top[f.mode] = std::max(top[f.mode], f.p);
  }
  std::map<int, MultiPoly> one_minus;
  MultiPoly den = one;
  for (const auto& [m, w] : weights) {
    one_minus.emplace(m, one - w);
    den *= one_minus.at(m).pow(top[m] + 1);
  }
  MultiPoly num(ctx->ring);
  for (const auto& [mono, c] : e.terms()) {
    if (!mono.is_balanced()) continue;
    MultiPoly t = c;
    for (const auto& [m, w] : weights) {
      int p = mono.powers(m).first;
      if (p) t *= factorial(p) * w.pow(p);
      int rest = top[m] - p;
      if (rest) t *= one_minus.at(m).pow(rest);
    }
    num += t;
  }
  return RationalFunction(num, den);
}

Rational trace_normalization(const std::map<int, Rational>& weights) {
  Rational n(1);
  for (const auto& [m, w] : weights) {
    require(!w.is_one(), ErrorCode::kDivergentTrace, "weight 1 on an active mode");
    n /= Rational(1) - w;
  }
  return n;
}

MultiPoly twisted_trace_numeric(const AlgebraElement& e, const std::map<int, Rational>& weights,
                                bool normalized) {
  const auto& ctx = e.context();
  require(ctx != nullptr, ErrorCode::kInvalidArgument, "twisted_trace: element without context");
  for (int m : e.modes_used())
    require(weights.count(m) > 0, ErrorCode::kInvalidArgument,
            "twisted_trace: no weight for mode " + ctx->modes->label(m).name());
  Rational norm = trace_normalization(weights);
  std::map<int, Rational> ratio;
  for (const auto& [m, w] : weights) ratio.emplace(m, w / (Rational(1) - w));
  MultiPoly out(ctx->ring);
  for (const auto& [mono, c] : e.terms()) {
    if (!mono.is_balanced()) continue;
    Rational f(1);
    for (const auto& fac : mono.factors()) f *= factorial(fac.p) * ratio.at(fac.mode).pow(fac.p);
    out += c * f;
  }
  if (!normalized) out *= norm;
  return out;
}

// ---- substitutions ----

namespace {

AlgebraElement image_a(const ContextPtr& ctx, const SubstitutionRules& rules, int m) {
  auto it = rules.annihilation.find(m);
  return it != rules.annihilation.end() ? it->second : AlgebraElement::annihilation(ctx, m);
}

AlgebraElement image_ad(const ContextPtr& ctx, const SubstitutionRules& rules, int m) {
  auto it = rules.creation.find(m);
  return it != rules.creation.end() ? it->second : AlgebraElement::creation(ctx, m);
}

}  // namespace

std::optional<HomomorphismViolation> find_homomorphism_violation(const ContextPtr& ctx,
                                                                const SubstitutionRules& rules) {
  int n = ctx->modes->size();
  std::vector<AlgebraElement> ia, iad;
  for (int m = 0; m < n; ++m) {
    ia.push_back(image_a(ctx, rules, m));
    iad.push_back(image_ad(ctx, rules, m));
  }
  auto name = [&](bool ad, int m) {
    return std::string(ad ? "ad[" : "a[") + ctx->modes->label(m).name() + "]";
  };
  AlgebraElement zero(ctx);
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      AlgebraElement expect = m == k ? AlgebraElement(ctx, Rational(1)) : zero;
      AlgebraElement res = commutator(ia[m], iad[k]) - expect;
      if (!res.is_zero()) return HomomorphismViolation{name(false, m), name(true, k), res.str()};
      if (k > m) {
        res = commutator(ia[m], ia[k]);
        if (!res.is_zero()) return HomomorphismViolation{name(false, m), name(false, k), res.str()};
        res = commutator(iad[m], iad[k]);
        if (!res.is_zero()) return HomomorphismViolation{name(true, m), name(true, k), res.str()};
      }
    }
  }
  return std::nullopt;
}

AlgebraElement substitute(const AlgebraElement& e, const SubstitutionRules& rules, bool check) {
  const auto& ctx = e.context();
  require(ctx != nullptr, ErrorCode::kInvalidArgument, "substitute: element without context");
  for (const auto& [m, img] : rules.annihilation)
    require(img.context() == nullptr || img.context()->same_as(*ctx), ErrorCode::kContextMismatch,
            "substitute: rule image from another context");
  for (const auto& [m, img] : rules.creation)
    require(img.context() == nullptr || img.context()->same_as(*ctx), ErrorCode::kContextMismatch,
            "substitute: rule image from another context");
  if (check) {
    auto v = find_homomorphism_violation(ctx, rules);
    if (v)
      fail(ErrorCode::kNotHomomorphic,
           "substitution is not a homomorphism: [" + v->left + ", " + v->right + "] -> " + v->residual);
  }
  std::map<std::pair<int, int>, AlgebraElement> cache;  // (mode, +-power)
  auto pow_of = [&](int m, bool ad, int p) -> const AlgebraElement& {
    auto key = std::make_pair(m, ad ? p : -p);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    AlgebraElement base = ad ? image_ad(ctx, rules, m) : image_a(ctx, rules, m);
    return cache.emplace(key, power(base, p)).first->second;
  };
  AlgebraElement out(ctx);
  for (const auto& [mono, c] : e.terms()) {
    AlgebraElement t(ctx, c);
    for (const auto& f : mono.factors()) {
      if (f.p) t = t * pow_of(f.mode, true, f.p);
      if (f.q) t = t * pow_of(f.mode, false, f.q);
    }
    out += t;
  }
  return out;
}

AlgebraElement ad_conjugate(const AlgebraElement& y, const AlgebraElement& x, int max_order) {
  AlgebraElement out = x;
  AlgebraElement term = x;
  for (int k = 1; k <= max_order; ++k) {
    term = commutator(y, term) * Rational(1, k);
    if (term.is_zero()) return out;
    out += term;
  }
  fail(ErrorCode::kStructural, "ad-series did not terminate");
}

}  // namespace osclax
