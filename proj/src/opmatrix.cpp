#include "osclax/opmatrix.hpp"

#include <sstream>

#include "osclax/error.hpp"
#include "osclax/parallel.hpp"

namespace osclax {

int signed_to_pos(int a, int r) {
  require(a != 0 && a >= -r && a <= r, ErrorCode::kInvalidArgument,
          "signed index " + std::to_string(a) + " out of range for rank " + std::to_string(r));
  return a < 0 ? r + a : r + a - 1;
}

int pos_to_signed(int p, int r) {
  require(p >= 0 && p < 2 * r, ErrorCode::kInvalidArgument, "position out of range");
  return p < r ? p - r : p - r + 1;
}

std::vector<int> signed_indices(int r) {
  std::vector<int> out;
  for (int p = 0; p < 2 * r; ++p) out.push_back(pos_to_signed(p, r));
  return out;
}

OpMatrix::OpMatrix(ContextPtr ctx, std::vector<int> ranks) : ctx_(std::move(ctx)), ranks_(std::move(ranks)) {
  require(!ranks_.empty(), ErrorCode::kInvalidArgument, "OpMatrix: no index space");
  dim_ = 1;
  for (int r : ranks_) {
    require(r >= 1, ErrorCode::kInvalidArgument, "OpMatrix: rank must be positive");
    dim_ *= 2 * r;
  }
}

OpMatrix OpMatrix::identity(ContextPtr ctx, std::vector<int> ranks) {
  OpMatrix m(std::move(ctx), std::move(ranks));
  for (int i = 0; i < m.dim_; ++i) m.entries_.emplace(Key{i, i}, AlgebraElement(m.ctx_, Rational(1)));
  return m;
}

std::vector<int> OpMatrix::split(int composite) const {
  std::vector<int> parts(ranks_.size());
  for (std::size_t k = ranks_.size(); k-- > 0;) {
    parts[k] = composite % (2 * ranks_[k]);
    composite /= 2 * ranks_[k];
  }
  return parts;
}

int OpMatrix::join(const std::vector<int>& parts) const {
  int c = 0;
  for (std::size_t k = 0; k < ranks_.size(); ++k) c = c * 2 * ranks_[k] + parts[k];
  return c;
}

AlgebraElement OpMatrix::at(int row, int col) const {
  auto it = entries_.find({row, col});
  return it == entries_.end() ? AlgebraElement(ctx_) : it->second;
}

const AlgebraElement* OpMatrix::find(int row, int col) const {
  auto it = entries_.find({row, col});
  return it == entries_.end() ? nullptr : &it->second;
}

void OpMatrix::set(int row, int col, AlgebraElement e) {
  require(row >= 0 && row < dim_ && col >= 0 && col < dim_, ErrorCode::kInvalidArgument, "OpMatrix: position out of range");
  if (e.is_zero()) {
    entries_.erase({row, col});
  } else {
    entries_[{row, col}] = std::move(e);
  }
}

void OpMatrix::add(int row, int col, const AlgebraElement& e) {
  if (e.is_zero()) return;
  require(row >= 0 && row < dim_ && col >= 0 && col < dim_, ErrorCode::kInvalidArgument, "OpMatrix: position out of range");
  auto [it, inserted] = entries_.try_emplace({row, col}, e);
  if (!inserted) {
    it->second += e;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

AlgebraElement OpMatrix::get(int a, int b) const {
  require(ranks_.size() == 1, ErrorCode::kInvalidArgument, "signed access on a tensor-product matrix");
  return at(signed_to_pos(a, ranks_[0]), signed_to_pos(b, ranks_[0]));
}

void OpMatrix::put(int a, int b, AlgebraElement e) {
  require(ranks_.size() == 1, ErrorCode::kInvalidArgument, "signed access on a tensor-product matrix");
  set(signed_to_pos(a, ranks_[0]), signed_to_pos(b, ranks_[0]), std::move(e));
}

void OpMatrix::check_shape(const OpMatrix& o) const {
  require(ranks_ == o.ranks_, ErrorCode::kInvalidArgument, "OpMatrix: shape mismatch");
  if (ctx_ && o.ctx_ && !ctx_->same_as(*o.ctx_))
    fail(ErrorCode::kContextMismatch, "OpMatrix: entries from different contexts");
}

OpMatrix OpMatrix::operator-() const {
  OpMatrix r(*this);
  for (auto& [k, e] : r.entries_) e = -e;
  return r;
}

OpMatrix& OpMatrix::operator+=(const OpMatrix& o) {
  check_shape(o);
  for (const auto& [k, e] : o.entries_) add(k.first, k.second, e);
  return *this;
}

OpMatrix& OpMatrix::operator-=(const OpMatrix& o) {
  check_shape(o);
  for (const auto& [k, e] : o.entries_) add(k.first, k.second, -e);
  return *this;
}

OpMatrix operator*(const OpMatrix& a, const OpMatrix& b) {
  a.check_shape(b);
  OpMatrix r(a.ctx_, a.ranks_);
  std::size_t n = static_cast<std::size_t>(a.dim_);
  std::vector<std::vector<std::pair<int, const AlgebraElement*>>> arow(n), brow(n);
  for (const auto& [k, e] : a.entries_) arow[static_cast<std::size_t>(k.first)].emplace_back(k.second, &e);
  for (const auto& [k, e] : b.entries_) brow[static_cast<std::size_t>(k.first)].emplace_back(k.second, &e);
  std::vector<std::map<int, AlgebraElement>> out(n);
  parallel_for(n, [&](std::size_t i) {
    auto& row = out[i];
    for (const auto& [k, x] : arow[i]) {
      for (const auto& [j, y] : brow[static_cast<std::size_t>(k)]) {
        auto [it, inserted] = row.try_emplace(j, a.ctx_);
        it->second += (*x) * (*y);
      }
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    for (auto& [j, e] : out[i])
      if (!e.is_zero()) r.entries_.emplace(OpMatrix::Key{static_cast<int>(i), j}, std::move(e));
  return r;
}

OpMatrix operator*(OpMatrix a, const Rational& c) {
  if (c.is_zero()) {
    a.entries_.clear();
    return a;
  }
  for (auto& [k, e] : a.entries_) e *= c;
  return a;
}

OpMatrix operator*(OpMatrix a, const MultiPoly& c) {
  for (auto it = a.entries_.begin(); it != a.entries_.end();) {
    it->second *= c;
    if (it->second.is_zero()) {
      it = a.entries_.erase(it);
    } else {
      ++it;
    }
  }
  return a;
}

bool operator==(const OpMatrix& a, const OpMatrix& b) {
  if (a.ranks_ != b.ranks_) return false;
  if (a.entries_.size() != b.entries_.size()) return false;
  auto i = a.entries_.begin();
  auto j = b.entries_.begin();
  for (; i != a.entries_.end(); ++i, ++j)
    if (i->first != j->first || !(i->second == j->second)) return false;
  return true;
}

OpMatrix OpMatrix::map_entries(const std::function<AlgebraElement(const AlgebraElement&)>& f) const {
  OpMatrix r(ctx_, ranks_);
  for (const auto& [k, e] : entries_) r.set(k.first, k.second, f(e));
  return r;
}

OpMatrix OpMatrix::subs(int var, const MultiPoly& value) const {
  return map_entries([&](const AlgebraElement& e) { return e.subs(var, value); });
}

OpMatrix OpMatrix::coeff(int var, int k) const {
  return map_entries([&](const AlgebraElement& e) { return e.coeff(var, k); });
}

int OpMatrix::degree(int var) const {
  int d = -1;
  for (const auto& [k, e] : entries_) d = std::max(d, e.degree(var));
  return d;
}

std::string OpMatrix::index_label(int composite) const {
  auto parts = split(composite);
  std::string s = "(";
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(pos_to_signed(parts[k], ranks_[k]));
  }
  return s + ")";
}

std::string OpMatrix::dump() const {
  std::ostringstream os;
  for (const auto& [k, e] : entries_) os << index_label(k.first) << " " << index_label(k.second) << " " << e.str() << "\n";
  return os.str();
}

OpMatrix tensor(const OpMatrix& a, const OpMatrix& b) {
  if (a.context() && b.context() && !a.context()->same_as(*b.context()))
    fail(ErrorCode::kContextMismatch, "tensor: entries from different contexts");
  std::vector<int> ranks = a.ranks();
  ranks.insert(ranks.end(), b.ranks().begin(), b.ranks().end());
  OpMatrix r(a.context() ? a.context() : b.context(), ranks);
  for (const auto& [ka, ea] : a.entries())
    for (const auto& [kb, eb] : b.entries())
      r.add(ka.first * b.dim() + kb.first, ka.second * b.dim() + kb.second, ea * eb);
  return r;
}

OpMatrix commutator(const OpMatrix& a, const OpMatrix& b) { return a * b - b * a; }

OpMatrix embed_unit(const ContextPtr& ctx, int a, int b, int r) {
  OpMatrix m(ctx, {r});
  m.put(a, b, AlgebraElement(ctx, Rational(1)));
  return m;
}

OpMatrix e_unit(const ContextPtr& ctx, int A, int B, int r) {
  require(A >= 1 && A <= 2 * r && B >= 1 && B <= 2 * r, ErrorCode::kInvalidArgument, "e-label out of range");
  OpMatrix m(ctx, {r});
  m.set(A - 1, B - 1, AlgebraElement(ctx, Rational(1)));
  return m;
}

OpMatrix build_P(const ContextPtr& ctx, int r) {
  OpMatrix m(ctx, {r, r});
  int n = 2 * r;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) m.set(p * n + q, q * n + p, AlgebraElement(ctx, Rational(1)));
  return m;
}

OpMatrix build_Q(const ContextPtr& ctx, int r) {
  // sum_ab E_ab (x) E_{-a,-b}
  OpMatrix m(ctx, {r, r});
  int n = 2 * r;
  for (int a : signed_indices(r))
    for (int b : signed_indices(r)) {
      int pa = signed_to_pos(a, r), pb = signed_to_pos(b, r);
      int ma = signed_to_pos(-a, r), mb = signed_to_pos(-b, r);
      m.set(pa * n + ma, pb * n + mb, AlgebraElement(ctx, Rational(1)));
    }
  return m;
}

OpMatrix build_K(const ContextPtr& ctx, int r) {
  // sum_AB e_AB (x) e_AB
  OpMatrix m(ctx, {r, r});
  int n = 2 * r;
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) m.set(A * n + A, B * n + B, AlgebraElement(ctx, Rational(1)));
  return m;
}

OpMatrix build_R(const ContextPtr& ctx, int r, const MultiPoly& z, RBasis basis) {
  MultiPoly kappa(ctx->ring, Rational(r - 1));
  MultiPoly zk = z + kappa;
  OpMatrix id = OpMatrix::identity(ctx, {r, r});
  OpMatrix last = basis == RBasis::kBold ? build_Q(ctx, r) : build_K(ctx, r);
  return id * (z * zk) + build_P(ctx, r) * zk - last * z;
}

OpMatrix build_J(const ContextPtr& ctx, int r) {
  OpMatrix m(ctx, {r});
  for (int a : signed_indices(r)) m.put(a, -a, AlgebraElement(ctx, Rational(1)));
  return m;
}

OpMatrix build_B(const ContextPtr& ctx, const std::vector<int>& alpha) {
  int r = static_cast<int>(alpha.size());
  require(r >= 1, ErrorCode::kInvalidArgument, "build_B: empty sign vector");
  OpMatrix m(ctx, {r});
  AlgebraElement one(ctx, Rational(1));
  for (int i = 1; i <= r; ++i) {
    int s = alpha[static_cast<std::size_t>(i - 1)];
    require(s == 1 || s == -1, ErrorCode::kInvalidArgument, "build_B: signs must be +1 or -1");
    if (s == 1) {
      m.put(-i, -i, one);
      m.put(i, i, one);
    } else {
      m.put(-i, i, one);
      m.put(i, -i, one);
    }
  }
  return m;
}

OpMatrix build_Btilde(const ContextPtr& ctx, int r, int i, int j) {
  require(i >= 1 && i <= r && j >= 1 && j <= r, ErrorCode::kInvalidArgument, "build_Btilde: index out of range");
  require(i != j, ErrorCode::kInvalidArgument, "build_Btilde: requires i != j");
  OpMatrix m(ctx, {r});
  AlgebraElement one(ctx, Rational(1));
  for (int k = 1; k <= r; ++k) {
    if (k == i || k == j) continue;
    m.put(-k, -k, one);
    m.put(k, k, one);
  }
  m.put(-i, -j, one);
  m.put(-j, -i, one);
  m.put(i, j, one);
  m.put(j, i, one);
  return m;
}

OpMatrix prime_transpose(const OpMatrix& m) {
  require(m.ranks().size() == 1, ErrorCode::kInvalidArgument, "prime_transpose: single factor only");
  int r = m.rank();
  OpMatrix out(m.context(), {r});
  for (const auto& [k, e] : m.entries()) {
    int a = pos_to_signed(k.first, r), b = pos_to_signed(k.second, r);
    out.put(-b, -a, e);
  }
  return out;
}

OpMatrix t_transpose(const OpMatrix& m) {
  require(m.ranks().size() == 1, ErrorCode::kInvalidArgument, "t_transpose: single factor only");
  OpMatrix out(m.context(), m.ranks());
  for (const auto& [k, e] : m.entries()) out.set(k.second, k.first, e);
  return out;
}

// ---- Gaussian ----

Gaussian commutator(const Gaussian& a, const Gaussian& b) { return a * b - b * a; }

GaussMatrix GaussMatrix::real(const OpMatrix& m) { return {m, OpMatrix(m.context(), m.ranks())}; }

GaussMatrix operator*(const GaussMatrix& a, const GaussMatrix& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussMatrix operator*(GaussMatrix a, const Rational& c) { return {a.re * c, a.im * c}; }

GaussMatrix operator+(const GaussMatrix& a, const GaussMatrix& b) { return {a.re + b.re, a.im + b.im}; }

GaussMatrix operator-(const GaussMatrix& a, const GaussMatrix& b) { return {a.re - b.re, a.im - b.im}; }

bool operator==(const GaussMatrix& a, const GaussMatrix& b) { return a.re == b.re && a.im == b.im; }

GaussMatrix tensor(const GaussMatrix& a, const GaussMatrix& b) {
  return {tensor(a.re, b.re) - tensor(a.im, b.im), tensor(a.re, b.im) + tensor(a.im, b.re)};
}

GaussMatrix build_S_scaled(const ContextPtr& ctx, int r) {
  // [[-iJ, J], [iI, I]] in r x r blocks of the e-labels.
  GaussMatrix s{OpMatrix(ctx, {r}), OpMatrix(ctx, {r})};
  AlgebraElement one(ctx, Rational(1)), minus(ctx, Rational(-1));
  for (int A = 1; A <= r; ++A) {
    s.im.set(A - 1, r - A, minus);
    s.re.set(A - 1, r + (r + 1 - A) - 1, one);
    s.im.set(r + A - 1, A - 1, one);
    s.re.set(r + A - 1, r + A - 1, one);
  }
  return s;
}

GaussMatrix build_Sinv_scaled(const ContextPtr& ctx, int r) {
  // [[iJ, -iI], [J, I]]
  GaussMatrix s{OpMatrix(ctx, {r}), OpMatrix(ctx, {r})};
  AlgebraElement one(ctx, Rational(1)), minus(ctx, Rational(-1));
  for (int A = 1; A <= r; ++A) {
    s.im.set(A - 1, r - A, one);
    s.im.set(A - 1, r + A - 1, minus);
    s.re.set(r + A - 1, r - A, one);
    s.re.set(r + A - 1, r + A - 1, one);
  }
  return s;
}

namespace {

GaussMatrix conjugate(const GaussMatrix& x, bool forward) {
  const auto& ranks = x.re.ranks();
  const auto& ctx = x.re.context();
  GaussMatrix left = forward ? build_S_scaled(ctx, ranks[0]) : build_Sinv_scaled(ctx, ranks[0]);
  GaussMatrix right = forward ? build_Sinv_scaled(ctx, ranks[0]) : build_S_scaled(ctx, ranks[0]);
  Rational scale(1, 2);
  for (std::size_t k = 1; k < ranks.size(); ++k) {
    GaussMatrix l2 = forward ? build_S_scaled(ctx, ranks[k]) : build_Sinv_scaled(ctx, ranks[k]);
    GaussMatrix r2 = forward ? build_Sinv_scaled(ctx, ranks[k]) : build_S_scaled(ctx, ranks[k]);
    left = tensor(left, l2);
    right = tensor(right, r2);
    scale *= Rational(1, 2);
  }
  return left * x * right * scale;
}

}  // namespace

GaussMatrix conjugate_by_S(const GaussMatrix& x) { return conjugate(x, true); }
GaussMatrix conjugate_by_Sinv(const GaussMatrix& x) { return conjugate(x, false); }

// ---- generators ----

AlgebraElement GeneratorSet::get(int a, int b) const {
  auto it = F.find({a, b});
  return it == F.end() ? AlgebraElement(ctx) : it->second;
}

GeneratorSet extract_generators(const OpMatrix& l, int var) {
  require(l.ranks().size() == 1, ErrorCode::kInvalidArgument, "extract_generators: single-factor matrix expected");
  int r = l.rank();
  const auto& ctx = l.context();
  GeneratorSet g{r, ctx, {}};
  AlgebraElement one(ctx, Rational(1));
  for (int a : signed_indices(r)) {
    for (int b : signed_indices(r)) {
      AlgebraElement e = l.get(a, b);
      require(e.degree(var) <= 1, ErrorCode::kStructural, "extract_generators: entry not affine in the variable");
      AlgebraElement lead = e.coeff(var, 1);
      require(lead == (a == b ? one : AlgebraElement(ctx)), ErrorCode::kStructural,
              "extract_generators: leading matrix is not the identity");
      AlgebraElement f = e.coeff(var, 0);
      if (!f.is_zero()) g.F.emplace(std::make_pair(b, a), f);
    }
  }
  return g;
}

OpMatrix rebuild_from_generators(const GeneratorSet& g, int var) {
  MultiPoly z = MultiPoly::var(g.ctx->ring, var);
  OpMatrix l = OpMatrix::identity(g.ctx, {g.r}) * z;
  for (const auto& [ab, f] : g.F) {
    auto [a, b] = ab;
    l.add(signed_to_pos(b, g.r), signed_to_pos(a, g.r), f);
  }
  return l;
}

Gaussian MGenerators::get(int A, int B) const {
  auto it = M.find({A, B});
  if (it != M.end()) return it->second;
  return {};
}

MGenerators map_F_to_M(const GeneratorSet& g) {
  int r = g.r;
  OpMatrix f(g.ctx, {r});
  for (const auto& [ab, e] : g.F) f.add(signed_to_pos(ab.second, r), signed_to_pos(ab.first, r), e);
  GaussMatrix m = conjugate_by_Sinv(GaussMatrix::real(f));
  MGenerators out;
  out.r = r;
  for (int A = 1; A <= 2 * r; ++A)
    for (int B = 1; B <= 2 * r; ++B) {
      Gaussian v{m.re.at(B - 1, A - 1), m.im.at(B - 1, A - 1)};
      if (!v.is_zero()) out.M.emplace(std::make_pair(A, B), v);
    }
  return out;
}

std::map<std::pair<int, int>, Gaussian> map_M_to_F(const MGenerators& m, const ContextPtr& ctx) {
  int r = m.r;
  auto get = [&](int A, int B) {
    Gaussian v = m.get(A, B);
    if (!v.re.context()) v.re = AlgebraElement(ctx);
    if (!v.im.context()) v.im = AlgebraElement(ctx);
    return v;
  };
  auto times_i = [](const Gaussian& v) { return Gaussian{-v.im, v.re}; };
  auto half = [](Gaussian v) {
    v.re *= Rational(1, 2);
    v.im *= Rational(1, 2);
    return v;
  };
  std::map<std::pair<int, int>, Gaussian> out;
  for (int i = 1; i <= r; ++i) {
    for (int j = 1; j <= r; ++j) {
      Gaussian m1 = get(i, j), m2 = get(i, j + r), m3 = get(i + r, j), m4 = get(i + r, j + r);
      Gaussian im2 = times_i(m2), im3 = times_i(m3);
      Gaussian zero{AlgebraElement(ctx), AlgebraElement(ctx)};
      out[{-i, -j}] = half(m1 + im2 - im3 + m4);
      out[{-i, j}] = half(zero - m1 + im2 + im3 + m4);
      out[{i, -j}] = half(zero - m1 - im2 - im3 + m4);
      out[{i, j}] = half(m1 - im2 + im3 + m4);
    }
  }
  return out;
}

}  // namespace osclax
