#include "osclax/qsystem.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "json.hpp"
#include "osclax/error.hpp"
#include "osclax/parallel.hpp"

namespace osclax {

using Json = nlohmann::ordered_json;

// ---- chain spec ----

void ChainSpec::validate() const {
  require(rank >= 2 && rank <= 5, ErrorCode::kInvalidArgument, "chain rank must be in 2..5");
  require(length >= 1, ErrorCode::kInvalidArgument, "chain length must be at least 1");
  long long dim = 1;
  for (int k = 0; k < length; ++k) dim *= 2 * rank;
  require(dim <= 4096, ErrorCode::kInvalidArgument, "quantum space dimension above 4096");
  require(static_cast<int>(twists.size()) == rank, ErrorCode::kInvalidArgument,
          "expected " + std::to_string(rank) + " twists, got " + std::to_string(twists.size()));
  for (std::size_t i = 0; i < twists.size(); ++i) {
    const Rational& t = twists[i];
    std::string name = "t" + std::to_string(i + 1);
    require(!t.is_zero() && !t.is_one() && !(t == Rational(-1)), ErrorCode::kPrecondition,
            "degenerate twist: " + name + " = " + t.str());
    for (std::size_t j = 0; j < i; ++j) {
      std::string other = "t" + std::to_string(j + 1);
      require(!(t == twists[j]), ErrorCode::kPrecondition, "degenerate twists: " + name + " = " + other);
      require(!(t * twists[j]).is_one(), ErrorCode::kPrecondition, "degenerate twists: " + name + " " + other + " = 1");
    }
  }
}

std::string ChainSpec::to_json() const {
  Json j;
  j["rank"] = rank;
  j["length"] = length;
  auto ts = Json::array();
  for (const auto& t : twists) ts.push_back(t.str());
  j["twists"] = ts;
  return j.dump();
}

ChainSpec ChainSpec::from_json(const std::string& text) {
  ChainSpec c;
  try {
    auto j = nlohmann::json::parse(text);
    c.rank = j.at("rank").get<int>();
    c.length = j.at("length").get<int>();
    c.twists.clear();
    for (const auto& t : j.at("twists")) c.twists.push_back(Rational::parse(t.get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("bad chain spec: ") + e.what());
  }
  return c;
}

std::vector<Rational> default_twists(int r) {
  static const int primes[] = {2, 3, 5, 7, 11};
  require(r >= 1 && r <= 5, ErrorCode::kInvalidArgument, "default twists exist for rank 1..5");
  std::vector<Rational> t;
  for (int i = 0; i < r; ++i) t.emplace_back(1, primes[i]);
  return t;
}

std::vector<Rational> random_twists(int r, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(1, 9), den(2, 17);
  ChainSpec probe;
  probe.rank = r;
  for (;;) {
    probe.twists.clear();
    for (int i = 0; i < r; ++i) probe.twists.emplace_back(num(rng), den(rng));
    try {
      probe.validate();
      return probe.twists;
    } catch (const Error&) {
    }
  }
}

std::vector<Rational> parse_twists(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    require(!item.empty(), ErrorCode::kParse, "empty twist in list");
    out.push_back(Rational::parse(item));
  }
  require(!out.empty(), ErrorCode::kParse, "no twists given");
  return out;
}

// ---- quantum operators ----

namespace {

int ipow(int b, int e) {
  int v = 1;
  for (int k = 0; k < e; ++k) v *= b;
  return v;
}

}  // namespace

QuantumOperator::QuantumOperator(RingPtr ring, int r, int length)
    : ring_(std::move(ring)), r_(r), n_(length), dim_(ipow(2 * r, length)), rows_(static_cast<std::size_t>(dim_)) {}

QuantumOperator QuantumOperator::identity(RingPtr ring, int r, int length, const MultiPoly& scalar) {
  QuantumOperator q(std::move(ring), r, length);
  for (int i = 0; i < q.dim_; ++i) q.set(i, i, scalar);
  return q;
}

MultiPoly QuantumOperator::at(int row, int col) const {
  const auto& m = rows_.at(static_cast<std::size_t>(row));
  auto it = m.find(col);
  return it == m.end() ? MultiPoly(ring_) : it->second;
}

void QuantumOperator::set(int row, int col, MultiPoly p) {
  auto& m = rows_.at(static_cast<std::size_t>(row));
  if (p.is_zero()) {
    m.erase(col);
  } else {
    m[col] = std::move(p);
  }
}

void QuantumOperator::add(int row, int col, const MultiPoly& p) {
  if (p.is_zero()) return;
  auto& m = rows_.at(static_cast<std::size_t>(row));
  auto it = m.find(col);
  if (it == m.end()) {
    m.emplace(col, p);
    return;
  }
  it->second += p;
  if (it->second.is_zero()) m.erase(it);
}

bool QuantumOperator::is_zero() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const auto& m) { return m.empty(); });
}

std::size_t QuantumOperator::nonzeros() const {
  std::size_t n = 0;
  for (const auto& m : rows_) n += m.size();
  return n;
}

int QuantumOperator::degree(int var) const {
  int d = -1;
  for (const auto& m : rows_)
    for (const auto& [c, p] : m) d = std::max(d, p.degree(var));
  return d;
}

void QuantumOperator::check_shape(const QuantumOperator& o) const {
  require(r_ == o.r_ && n_ == o.n_, ErrorCode::kContextMismatch, "quantum operators of different shape");
  require(ring_->same_as(*o.ring_), ErrorCode::kContextMismatch, "quantum operators over different rings");
}

QuantumOperator QuantumOperator::operator-() const {
  QuantumOperator q = *this;
  for (auto& m : q.rows_)
    for (auto& [c, p] : m) p = -p;
  return q;
}

QuantumOperator& QuantumOperator::operator+=(const QuantumOperator& o) {
  check_shape(o);
  for (int i = 0; i < dim_; ++i)
    for (const auto& [c, p] : o.row(i)) add(i, c, p);
  return *this;
}

QuantumOperator& QuantumOperator::operator-=(const QuantumOperator& o) {
  check_shape(o);
  for (int i = 0; i < dim_; ++i)
    for (const auto& [c, p] : o.row(i)) add(i, c, -p);
  return *this;
}

QuantumOperator operator*(const QuantumOperator& a, const QuantumOperator& b) {
  a.check_shape(b);
  QuantumOperator out(a.ring_, a.r_, a.n_);
  parallel_for(static_cast<std::size_t>(a.dim_), [&](std::size_t i) {
    std::map<int, MultiPoly> acc;
    for (const auto& [k, x] : a.rows_[i])
      for (const auto& [j, y] : b.rows_[static_cast<std::size_t>(k)]) {
        auto it = acc.find(j);
        if (it == acc.end()) {
          acc.emplace(j, x * y);
        } else {
          it->second += x * y;
        }
      }
    for (auto it = acc.begin(); it != acc.end();) it = it->second.is_zero() ? acc.erase(it) : std::next(it);
    out.rows_[i] = std::move(acc);
  });
  return out;
}

QuantumOperator operator*(QuantumOperator a, const Rational& c) {
  if (c.is_zero()) return QuantumOperator(a.ring_, a.r_, a.n_);
  for (auto& m : a.rows_)
    for (auto& [k, p] : m) p *= c;
  return a;
}

QuantumOperator operator*(QuantumOperator a, const MultiPoly& c) {
  for (auto& m : a.rows_) {
    for (auto& [k, p] : m) p = p * c;
    for (auto it = m.begin(); it != m.end();) it = it->second.is_zero() ? m.erase(it) : std::next(it);
  }
  return a;
}

bool operator==(const QuantumOperator& a, const QuantumOperator& b) {
  if (a.r_ != b.r_ || a.n_ != b.n_) return false;
  return a.rows_ == b.rows_;
}

QuantumOperator QuantumOperator::subs(int var, const MultiPoly& value) const {
  QuantumOperator q(ring_, r_, n_);
  parallel_for(static_cast<std::size_t>(dim_), [&](std::size_t i) {
    for (const auto& [c, p] : rows_[i]) {
      MultiPoly v = p.subs(var, value);
      if (!v.is_zero()) q.rows_[i].emplace(c, std::move(v));
    }
  });
  return q;
}

QuantumOperator QuantumOperator::conjugate_sites(const OpMatrix& m) const {
  int n = 2 * r_;
  require(m.dim() == n, ErrorCode::kContextMismatch, "conjugate_sites: site matrix of wrong size");
  std::vector<int> sigma(static_cast<std::size_t>(n), -1), inv(static_cast<std::size_t>(n), -1);
  for (const auto& [k, e] : m.entries()) {
    require(e.is_scalar() && e.scalar_part() == MultiPoly(e.context()->ring, Rational(1)), ErrorCode::kInvalidArgument,
            "conjugate_sites: not a permutation matrix");
    require(sigma[static_cast<std::size_t>(k.second)] < 0, ErrorCode::kInvalidArgument,
            "conjugate_sites: not a permutation matrix");
    sigma[static_cast<std::size_t>(k.second)] = k.first;
    inv[static_cast<std::size_t>(k.first)] = k.second;
  }
  for (int p = 0; p < n; ++p)
    require(sigma[static_cast<std::size_t>(p)] >= 0 && inv[static_cast<std::size_t>(p)] >= 0,
            ErrorCode::kInvalidArgument, "conjugate_sites: not a permutation matrix");
  auto apply = [&](const std::vector<int>& perm, int composite) {
    int out = 0, scale = 1;
    for (int k = 0; k < n_; ++k) {
      int d = composite % n;
      composite /= n;
      out += perm[static_cast<std::size_t>(d)] * scale;
      scale *= n;
    }
    return out;
  };
  // (M X M)_{sigma(K), sigma^-1(L)} = X_{K L}
  QuantumOperator q(ring_, r_, n_);
  for (int k = 0; k < dim_; ++k) {
    int row = apply(sigma, k);
    for (const auto& [l, p] : rows_[static_cast<std::size_t>(k)]) q.set(row, apply(inv, l), p);
  }
  return q;
}

std::optional<Rational> QuantumOperator::ratio_to(const QuantumOperator& o) const {
  check_shape(o);
  for (int i = 0; i < dim_; ++i) {
    if (o.rows_[static_cast<std::size_t>(i)].empty()) continue;
    const auto& [c, p] = *o.rows_[static_cast<std::size_t>(i)].begin();
    MultiPoly mine = at(i, c);
    if (mine.is_zero()) return std::nullopt;
    Rational ratio = mine.terms().back().coef / p.terms().back().coef;
    if (o * ratio == *this) return ratio;
    return std::nullopt;
  }
  return std::nullopt;
}

std::string QuantumOperator::index_label(int composite) const {
  int n = 2 * r_;
  std::vector<int> digits(static_cast<std::size_t>(n_));
  for (int k = n_ - 1; k >= 0; --k) {
    digits[static_cast<std::size_t>(k)] = composite % n;
    composite /= n;
  }
  std::string s = "(";
  for (int k = 0; k < n_; ++k) {
    if (k) s += ",";
    s += std::to_string(pos_to_signed(digits[static_cast<std::size_t>(k)], r_));
  }
  return s + ")";
}

std::string QuantumOperator::dump() const {
  std::string out;
  for (int i = 0; i < dim_; ++i)
    for (const auto& [c, p] : rows_[static_cast<std::size_t>(i)]) out += index_label(i) + index_label(c) + " " + p.str() + "\n";
  return out;
}

QuantumOperator commutator(const QuantumOperator& a, const QuantumOperator& b) { return a * b - b * a; }

namespace {

// Appends one site: out_{(I i),(J j)} = x_{IJ} * m[i][j].
using SiteMatrix = std::vector<std::vector<MultiPoly>>;

QuantumOperator append_site(const QuantumOperator& x, const SiteMatrix& m) {
  int n = 2 * x.rank();
  QuantumOperator out(x.ring(), x.rank(), x.length() + 1);
  for (int i = 0; i < x.dim(); ++i)
    for (const auto& [j, p] : x.row(i))
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const MultiPoly& e = m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
          if (!e.is_zero()) out.set(i * n + a, j * n + b, p * e);
        }
  return out;
}

void add_residual(CheckReport& rep, const QuantumOperator& res, const std::string& prefix) {
  for (int i = 0; i < res.dim(); ++i)
    for (const auto& [c, p] : res.row(i))
      rep.add_witness({prefix + res.index_label(i), res.index_label(c), p.size(), p.str()});
}

ContextPtr scalar_context() { return make_context({}); }

Json chain_params(const ChainSpec& spec) { return Json::parse(spec.to_json()); }

}  // namespace

QuantumOperator transfer_matrix(const ChainSpec& spec, const std::string& var) {
  spec.validate();
  int r = spec.rank, n = 2 * r;
  auto ctx = scalar_context();
  OpMatrix R = build_R(ctx, r, MultiPoly::var(ctx->ring, var));
  // site blocks R[c][b] (aux c -> b) as site matrices
  std::vector<std::vector<SiteMatrix>> blocks(static_cast<std::size_t>(n),
                                              std::vector<SiteMatrix>(static_cast<std::size_t>(n)));
  for (int c = 0; c < n; ++c)
    for (int b = 0; b < n; ++b) {
      SiteMatrix m(static_cast<std::size_t>(n), std::vector<MultiPoly>(static_cast<std::size_t>(n), MultiPoly(ctx->ring)));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const AlgebraElement* e = R.find(c * n + i, b * n + j);
          if (e) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e->scalar_part();
        }
      blocks[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)] = std::move(m);
    }
  auto charges = fundamental_twist_charges(r);
  std::vector<QuantumOperator> diag(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t a) {
    // row a of the monodromy in the auxiliary space
    std::vector<QuantumOperator> vec(static_cast<std::size_t>(n), QuantumOperator(ctx->ring, r, 0));
    vec[a].set(0, 0, MultiPoly(ctx->ring, Rational(1)));
    for (int site = 0; site < spec.length; ++site) {
      std::vector<QuantumOperator> next(static_cast<std::size_t>(n), QuantumOperator(ctx->ring, r, site + 1));
      for (int c = 0; c < n; ++c) {
        if (vec[static_cast<std::size_t>(c)].is_zero()) continue;
        for (int b = 0; b < n; ++b)
          next[static_cast<std::size_t>(b)] += append_site(vec[static_cast<std::size_t>(c)], blocks[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)]);
      }
      vec = std::move(next);
    }
    diag[a] = vec[a] * evaluate_charge(charges[a], spec.twists);
  });
  QuantumOperator t(ctx->ring, r, spec.length);
  for (const auto& d : diag) t += d;
  return t;
}

// ---- Q-operators ----

const char* qfamily_name(QFamily f) {
  switch (f) {
    case QFamily::kSpinor: return "spinor";
    case QFamily::kFund: return "fund";
    case QFamily::kFundBar: return "fund-bar";
    case QFamily::kFundI: return "fund-i";
    case QFamily::kFundBarI: return "fund-bar-i";
  }
  return "?";
}

QFamily parse_qfamily(const std::string& name) {
  for (QFamily f : {QFamily::kSpinor, QFamily::kFund, QFamily::kFundBar, QFamily::kFundI, QFamily::kFundBarI})
    if (name == qfamily_name(f)) return f;
  fail(ErrorCode::kInvalidArgument, "unknown Q family: " + name);
}

std::string QSelector::label() const {
  std::string s = qfamily_name(family);
  if (family == QFamily::kSpinor) {
    s += "{";
    for (std::size_t k = 0; k < minus.size(); ++k) s += (k ? "," : "") + std::to_string(minus[k]);
    s += "}";
  } else if (family == QFamily::kFundI || family == QFamily::kFundBarI) {
    s += "(" + std::to_string(node) + ")";
  }
  return s;
}

QResult q_operator(const ChainSpec& spec, const QSelector& sel, const std::string& var) {
  spec.validate();
  int r = spec.rank, n = 2 * r;
  bool fundamental = sel.family != QFamily::kSpinor;
  std::vector<Rational> tw = spec.twists;
  std::optional<OpMatrix> outer, inner;  // quantum-space conjugations, inner first

  LaxSpec ls;
  ls.family = fundamental ? LaxFamily::kFundDegenerate : LaxFamily::kSpinorDegenerate;
  ls.rank = r;
  auto ctx = lax_context(ls);

  if (!fundamental) {
    std::vector<int> alpha(static_cast<std::size_t>(r), 1);
    for (int i : sel.minus) {
      require(i >= 1 && i <= r, ErrorCode::kInvalidArgument, "sign position out of range: " + std::to_string(i));
      require(alpha[static_cast<std::size_t>(i - 1)] == 1, ErrorCode::kInvalidArgument, "repeated sign position");
      alpha[static_cast<std::size_t>(i - 1)] = -1;
      tw[static_cast<std::size_t>(i - 1)] = tw[static_cast<std::size_t>(i - 1)].inverse();
    }
    if (!sel.minus.empty()) outer = build_B(ctx, alpha);
  } else {
    bool bar = sel.family == QFamily::kFundBar || sel.family == QFamily::kFundBarI;
    bool swapped = sel.family == QFamily::kFundI || sel.family == QFamily::kFundBarI;
    if (swapped) {
      require(sel.node >= 1 && sel.node <= r - 1, ErrorCode::kInvalidArgument,
              "fund node must be in 1.." + std::to_string(r - 1));
      std::swap(tw[static_cast<std::size_t>(sel.node - 1)], tw[static_cast<std::size_t>(r - 1)]);
      outer = build_Btilde(ctx, r, sel.node, r);
    }
    if (bar) {
      for (auto& t : tw) t = t.inverse();
      inner = build_J(ctx, r);
    }
  }

  auto weights = mode_weights(ctx, r, fundamental, tw);
  for (const auto& [m, w] : weights)
    require(!w.is_one(), ErrorCode::kDivergentTrace, "divergent trace: mode " + ctx->modes->label(m).name() + " has weight 1");

  OpMatrix l = build_lax(ls, ctx, MultiPoly::var(ctx->ring, var));
  std::vector<std::vector<std::pair<int, AlgebraElement>>> lrows(static_cast<std::size_t>(n));
  for (const auto& [k, e] : l.entries()) lrows[static_cast<std::size_t>(k.first)].emplace_back(k.second, e);

  QuantumOperator q(ctx->ring, r, spec.length);
  int dim = q.dim();
  std::vector<std::map<int, MultiPoly>> rows(static_cast<std::size_t>(dim));
  parallel_for(static_cast<std::size_t>(dim), [&](std::size_t row) {
    std::vector<int> digits(static_cast<std::size_t>(spec.length));
    int rest = static_cast<int>(row);
    for (int k = spec.length - 1; k >= 0; --k) {
      digits[static_cast<std::size_t>(k)] = rest % n;
      rest /= n;
    }
    // depth-first over column digits with running oscillator products
    std::function<void(int, int, const AlgebraElement&)> walk = [&](int site, int col, const AlgebraElement& prefix) {
      if (site == spec.length) {
        MultiPoly v = twisted_trace_numeric(prefix, weights, true);
        if (!v.is_zero()) rows[row].emplace(col, std::move(v));
        return;
      }
      for (const auto& [j, e] : lrows[static_cast<std::size_t>(digits[static_cast<std::size_t>(site)])])
        walk(site + 1, col * n + j, site == 0 ? e : prefix * e);
    };
    walk(0, 0, AlgebraElement(ctx, Rational(1)));
  });
  for (int i = 0; i < dim; ++i)
    for (auto& [c, p] : rows[static_cast<std::size_t>(i)]) q.set(i, c, std::move(p));
  if (inner) q = q.conjugate_sites(*inner);
  if (outer) q = q.conjugate_sites(*outer);
  return {std::move(q), trace_normalization(weights)};
}

QuantumOperator q_zero(const ChainSpec& spec, const std::string& var) {
  spec.validate();
  RingPtr ring = standard_ring();
  MultiPoly p = (MultiPoly::var(ring, var) + MultiPoly(ring, Rational(1))).pow(spec.length);
  return QuantumOperator::identity(ring, spec.rank, spec.length, p);
}

// ---- checks ----

CheckReport check_absorption(int r, bool fundamental) {
  CheckReport rep;
  rep.check_id = fundamental ? "absorption-fund" : "absorption-spinor";
  Json params;
  params["rank"] = r;
  rep.params = params.dump();
  ReportTimer timer(rep);
  LaxSpec ls;
  ls.family = fundamental ? LaxFamily::kFundDegenerate : LaxFamily::kSpinorDegenerate;
  ls.rank = r;
  auto ctx = lax_context(ls);
  OpMatrix l = build_lax(ls, ctx, "z");
  auto modes = mode_twist_charges(ctx, r, fundamental);
  auto d = fundamental_twist_charges(r);
  for (const auto& [k, e] : l.entries()) {
    Charge want = d[static_cast<std::size_t>(k.second)];
    want += -d[static_cast<std::size_t>(k.first)];
    for (const auto& [mono, c] : e.terms()) {
      Charge got(r);
      for (const auto& f : mono.factors()) {
        auto it = modes.find(f.mode);
        require(it != modes.end(), ErrorCode::kStructural, "mode without twist charge");
        for (int s = 0; s < std::abs(f.p - f.q); ++s) got += f.p > f.q ? it->second : -it->second;
      }
      if (!(got == want)) {
        rep.add_witness({l.index_label(k.first), l.index_label(k.second), 1,
                         AlgebraElement::monomial(ctx, mono, c).str()});
      }
    }
  }
  return rep;
}

namespace {

struct NamedOp {
  std::string name;
  QuantumOperator at_a;  // argument x (resp z)
  QuantumOperator at_b;  // argument y (resp u)
};

void commute_all(CheckReport& rep, const std::vector<NamedOp>& ops) {
  struct Job {
    std::size_t i, j;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i; j < ops.size(); ++j) jobs.push_back({i, j});
  std::vector<QuantumOperator> res(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t k) { res[k] = commutator(ops[jobs[k].i].at_a, ops[jobs[k].j].at_b); });
  for (std::size_t k = 0; k < jobs.size(); ++k)
    add_residual(rep, res[k], "[" + ops[jobs[k].i].name + "," + ops[jobs[k].j].name + "]");
}

}  // namespace

CheckReport check_commuting(const ChainSpec& spec, const std::vector<QSelector>& qs, bool with_transfer) {
  CheckReport rep;
  rep.check_id = "commuting-family";
  Json params = chain_params(spec);
  auto names = Json::array();
  for (const auto& s : qs) names.push_back(s.label());
  params["operators"] = names;
  params["transfer"] = with_transfer;
  rep.params = params.dump();
  ReportTimer timer(rep);
  spec.validate();
  std::vector<NamedOp> ops;
  if (with_transfer) ops.push_back({"T", transfer_matrix(spec, "x"), transfer_matrix(spec, "y")});
  for (const auto& s : qs) {
    auto a = q_operator(spec, s, "x");
    auto b = q_operator(spec, s, "y");
    rep.notes.push_back(s.label() + " normalization " + a.normalization.str());
    ops.push_back({s.label(), std::move(a.op), std::move(b.op)});
  }
  commute_all(rep, ops);
  return rep;
}

const char* qq_name(QQRelation r) {
  switch (r) {
    case QQRelation::kSpinor1: return "spinor1";
    case QQRelation::kSpinor2: return "spinor2";
    case QQRelation::kFund: return "fund";
  }
  return "?";
}

CheckReport qq_check(const ChainSpec& spec, const QQOptions& opt) {
  CheckReport rep;
  rep.check_id = "qq";
  Json params = chain_params(spec);
  auto rel = Json::array();
  if (opt.spinor1) rel.push_back("spinor1");
  if (opt.spinor2) rel.push_back("spinor2");
  if (opt.fund) rel.push_back("fund");
  params["relations"] = rel;
  if (opt.wrong_node) params["mutation"] = "wrong-node";
  rep.params = params.dump();
  ReportTimer timer(rep);
  require(spec.rank == 4, ErrorCode::kInvalidArgument, "QQ relations are implemented for rank 4");
  spec.validate();
  const auto& t = spec.twists;
  Rational p1 = t[0] - t[1], p2 = t[0] - t[1].inverse(), p3 = t[2] - t[3];
  require(!p1.is_zero() && !p2.is_zero() && !p3.is_zero(), ErrorCode::kPrecondition, "QQ prefactor vanishes");

  RingPtr ring = standard_ring();
  int z = ring->index("z"), u = ring->index("u");
  MultiPoly zv = MultiPoly::var(ring, z), uv = MultiPoly::var(ring, u);
  auto shift = [&](const QuantumOperator& q, int c) { return q.subs(z, zv + uv + MultiPoly(ring, Rational(c))); };

  std::vector<std::pair<std::string, QSelector>> wanted;
  wanted.push_back({"Qs{2}", {QFamily::kSpinor, {2}, 0}});
  wanted.push_back({"Qs{1}", {QFamily::kSpinor, {opt.wrong_node ? 3 : 1}, 0}});
  if (opt.spinor2) {
    wanted.push_back({"Qs{}", {QFamily::kSpinor, {}, 0}});
    wanted.push_back({"Qs{1,2}", {QFamily::kSpinor, {1, 2}, 0}});
  }
  if (opt.fund) {
    wanted.push_back({"Qf", {QFamily::kFund, {}, 0}});
    wanted.push_back({"Qf(3)", {QFamily::kFundI, {}, 3}});
  }
  std::map<std::string, QuantumOperator> q;
  for (const auto& [name, sel] : wanted) {
    auto res = q_operator(spec, sel, "z");
    rep.notes.push_back(name + " = " + sel.label() + ", normalization " + res.normalization.str());
    q.emplace(name, std::move(res.op));
  }

  // A^{[u]}(z) from spinor1
  QuantumOperator lhs1 = shift(q.at("Qs{2}"), -1) * shift(q.at("Qs{1}"), 0) * t[0] -
                         shift(q.at("Qs{2}"), 0) * shift(q.at("Qs{1}"), -1) * t[1];
  QuantumOperator a = lhs1 * p1.inverse();
  if (a.is_zero()) {
    rep.add_witness({"A", "", 0, "spinor1 left side vanishes"});
    return rep;
  }
  // A is a function of z + u
  QuantumOperator a0 = a.subs(u, MultiPoly(ring, Rational(0)));
  add_residual(rep, a0.subs(z, zv + uv) - a, "A-shift");
  rep.notes.push_back("A: polynomial entries, degree " + std::to_string(a0.degree(z)) + " in z, " +
                      std::to_string(a0.nonzeros()) + " nonzero entries");

  auto compare = [&](const char* name, const QuantumOperator& lhs, const QuantumOperator& rhs) {
    auto c = lhs.ratio_to(rhs);
    if (!c) {
      add_residual(rep, lhs - rhs, std::string(name) + ":");
      return;
    }
    rep.notes.push_back(std::string(name) + ": left = " + c->str() + " x right");
  };
  if (opt.spinor2) {
    QuantumOperator lhs2 = shift(q.at("Qs{}"), -1) * shift(q.at("Qs{1,2}"), 0) * t[0] -
                           shift(q.at("Qs{}"), 0) * shift(q.at("Qs{1,2}"), -1) * t[1].inverse();
    compare("spinor2", lhs2, a * p2);
  }
  if (opt.fund) {
    QuantumOperator q0 = q_zero(spec, "z");
    QuantumOperator lhs3 = shift(q.at("Qf"), 1) * shift(q.at("Qf(3)"), 0) * t[2] -
                           shift(q.at("Qf"), 0) * shift(q.at("Qf(3)"), 1) * t[3];
    compare("fund", lhs3, a * shift(q0, 0) * p3);
  }

  if (opt.check_commuting) {
    CheckReport comm;
    comm.check_id = "commuting";
    std::vector<NamedOp> ops;
    MultiPoly yv = MultiPoly::var(ring, "y"), xv = MultiPoly::var(ring, "x");
    ops.push_back({"T", transfer_matrix(spec, "x"), transfer_matrix(spec, "y")});
    ops.push_back({"A", a0.subs(z, xv), a0.subs(z, yv)});
    for (auto& [name, op] : q) ops.push_back({name, op.subs(z, xv), op.subs(z, yv)});
    commute_all(comm, ops);
    rep.notes.push_back(std::string("all operators pairwise commute: ") + (comm.pass ? "yes" : "no"));
    rep.absorb(comm);
  }
  return rep;
}

}  // namespace osclax
