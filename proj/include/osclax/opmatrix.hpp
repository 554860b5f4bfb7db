#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "osclax/algebra.hpp"

namespace osclax {

// Signed index a in {-r..-1, 1..r} <-> position 0..2r-1 in the order
// -r < ... < -1 < 1 < ... < r. Position p equals B-1 where E_ab = e_AB.
int signed_to_pos(int a, int r);
int pos_to_signed(int p, int r);
std::vector<int> signed_indices(int r);

// Square matrix over AlgebraElement acting on a tensor product of 2r-dim
// spaces (one rank per factor). Composite positions are row-major.
class OpMatrix {
 public:
  using Key = std::pair<int, int>;

  OpMatrix() = default;
  OpMatrix(ContextPtr ctx, std::vector<int> ranks);
  static OpMatrix identity(ContextPtr ctx, std::vector<int> ranks);

  const ContextPtr& context() const { return ctx_; }
  const std::vector<int>& ranks() const { return ranks_; }
  int rank() const { return ranks_.at(0); }
  int dim() const { return dim_; }
  std::vector<int> split(int composite) const;
  int join(const std::vector<int>& parts) const;

  const std::map<Key, AlgebraElement>& entries() const { return entries_; }
  AlgebraElement at(int row, int col) const;
  const AlgebraElement* find(int row, int col) const;
  void set(int row, int col, AlgebraElement e);
  void add(int row, int col, const AlgebraElement& e);

  // Single-factor access by signed indices.
  AlgebraElement get(int a, int b) const;
  void put(int a, int b, AlgebraElement e);

  bool is_zero() const { return entries_.empty(); }

  OpMatrix operator-() const;
  OpMatrix& operator+=(const OpMatrix& o);
  OpMatrix& operator-=(const OpMatrix& o);
  friend OpMatrix operator+(OpMatrix a, const OpMatrix& b) { return a += b; }
  friend OpMatrix operator-(OpMatrix a, const OpMatrix& b) { return a -= b; }
  // Entry products keep the order (a entry) * (b entry).
  friend OpMatrix operator*(const OpMatrix& a, const OpMatrix& b);
  friend OpMatrix operator*(OpMatrix a, const Rational& c);
  friend OpMatrix operator*(OpMatrix a, const MultiPoly& c);
  friend bool operator==(const OpMatrix& a, const OpMatrix& b);

  OpMatrix map_entries(const std::function<AlgebraElement(const AlgebraElement&)>& f) const;
  OpMatrix subs(int var, const MultiPoly& value) const;
  OpMatrix coeff(int var, int k) const;
  int degree(int var) const;

  // One line per nonzero entry: "(row)(col) <entry>", signed labels.
  std::string dump() const;
  std::string index_label(int composite) const;

 private:
  void check_shape(const OpMatrix& o) const;

  ContextPtr ctx_;
  std::vector<int> ranks_;
  int dim_ = 0;
  std::map<Key, AlgebraElement> entries_;
};

OpMatrix tensor(const OpMatrix& a, const OpMatrix& b);
OpMatrix commutator(const OpMatrix& a, const OpMatrix& b);

OpMatrix embed_unit(const ContextPtr& ctx, int a, int b, int r);
// Unit matrix in the 1-based e-labels, A, B in 1..2r.
OpMatrix e_unit(const ContextPtr& ctx, int A, int B, int r);

enum class RBasis { kBold, kPlain };

OpMatrix build_P(const ContextPtr& ctx, int r);
OpMatrix build_Q(const ContextPtr& ctx, int r);
OpMatrix build_K(const ContextPtr& ctx, int r);
// z(z+k) I + (z+k) P - z Q (bold) or - z K (plain), k = r-1.
OpMatrix build_R(const ContextPtr& ctx, int r, const MultiPoly& z, RBasis basis = RBasis::kBold);
// 2r x 2r reversed identity, sum_a E_{a,-a}.
OpMatrix build_J(const ContextPtr& ctx, int r);
OpMatrix build_B(const ContextPtr& ctx, const std::vector<int>& alpha);
OpMatrix build_Btilde(const ContextPtr& ctx, int r, int i, int j);

// M'_{ab} = M_{-b,-a}; M^t_{ab} = M_{ba}. Single-factor matrices only.
OpMatrix prime_transpose(const OpMatrix& m);
OpMatrix t_transpose(const OpMatrix& m);

// ---- Gaussian-rational extension ----

struct Gaussian {
  AlgebraElement re;
  AlgebraElement im;

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  friend Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re + b.re, a.im + b.im}; }
  friend Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re - b.re, a.im - b.im}; }
  friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re == b.re && a.im == b.im; }
};

Gaussian commutator(const Gaussian& a, const Gaussian& b);

struct GaussMatrix {
  OpMatrix re;
  OpMatrix im;

  static GaussMatrix real(const OpMatrix& m);
  friend GaussMatrix operator*(const GaussMatrix& a, const GaussMatrix& b);
  friend GaussMatrix operator*(GaussMatrix a, const Rational& c);
  friend GaussMatrix operator+(const GaussMatrix& a, const GaussMatrix& b);
  friend GaussMatrix operator-(const GaussMatrix& a, const GaussMatrix& b);
  friend bool operator==(const GaussMatrix& a, const GaussMatrix& b);
};

GaussMatrix tensor(const GaussMatrix& a, const GaussMatrix& b);

// sqrt(2) S and sqrt(2) S^{-1}; the 1/sqrt 2 factors are tracked by callers
// (S X S^{-1} = St X St^{-1} / 2).
GaussMatrix build_S_scaled(const ContextPtr& ctx, int r);
GaussMatrix build_Sinv_scaled(const ContextPtr& ctx, int r);
// S X S^{-1} on one factor, (S (x) S) X (S^{-1} (x) S^{-1}) on two factors.
GaussMatrix conjugate_by_S(const GaussMatrix& x);
GaussMatrix conjugate_by_Sinv(const GaussMatrix& x);

// ---- generators ----

struct GeneratorSet {
  int r = 0;
  ContextPtr ctx;
  std::map<std::pair<int, int>, AlgebraElement> F;  // signed (a, b)

  AlgebraElement get(int a, int b) const;
};

// L must be z I + sum_ab E_ab F_ba (affine, monic in var); F_ba is the
// constant part of entry (a, b).
GeneratorSet extract_generators(const OpMatrix& l, int var);
OpMatrix rebuild_from_generators(const GeneratorSet& g, int var);

struct MGenerators {
  int r = 0;
  std::map<std::pair<int, int>, Gaussian> M;  // 1-based (A, B)

  Gaussian get(int A, int B) const;
};

// sum E_ab F_ba = sum S e_AB S^{-1} M_BA solved for M.
MGenerators map_F_to_M(const GeneratorSet& g);
// Component formulas for F in terms of M (Gaussian valued).
std::map<std::pair<int, int>, Gaussian> map_M_to_F(const MGenerators& m, const ContextPtr& ctx);

}  // namespace osclax
