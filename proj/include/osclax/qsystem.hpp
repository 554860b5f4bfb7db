#pragma once

#include <map>
#include <string>
#include <vector>

#include "osclax/lax.hpp"
#include "osclax/report.hpp"

namespace osclax {

// Chain of N sites in the 2r-dim rep with twists t_i = e^{phi_i}.
struct ChainSpec {
  int rank = 4;
  int length = 1;
  std::vector<Rational> twists;  // t_1..t_r

  // kInvalidArgument for bad shapes, kPrecondition for degenerate twists
  // (t_i in {0, +-1}, t_i t_j = 1 or t_i = t_j).
  void validate() const;
  std::string to_json() const;
  static ChainSpec from_json(const std::string& text);
  bool operator==(const ChainSpec&) const = default;
};

std::vector<Rational> default_twists(int r);
// Seeded random twist point; always passes validate().
std::vector<Rational> random_twists(int r, unsigned seed);
std::vector<Rational> parse_twists(const std::string& text);  // "1/2,1/3,..."

// Dense-indexed, row-sparse matrix of polynomials on ((2r)^N)-dim space.
// Site k of a composite index is digit k (site 1 most significant) in
// position order.
class QuantumOperator {
 public:
  QuantumOperator() = default;
  QuantumOperator(RingPtr ring, int r, int length);
  static QuantumOperator identity(RingPtr ring, int r, int length, const MultiPoly& scalar);

  const RingPtr& ring() const { return ring_; }
  int rank() const { return r_; }
  int length() const { return n_; }
  int dim() const { return dim_; }

  MultiPoly at(int row, int col) const;
  void set(int row, int col, MultiPoly p);
  void add(int row, int col, const MultiPoly& p);
  const std::map<int, MultiPoly>& row(int i) const { return rows_.at(static_cast<std::size_t>(i)); }

  bool is_zero() const;
  std::size_t nonzeros() const;
  int degree(int var) const;

  QuantumOperator operator-() const;
  QuantumOperator& operator+=(const QuantumOperator& o);
  QuantumOperator& operator-=(const QuantumOperator& o);
  friend QuantumOperator operator+(QuantumOperator a, const QuantumOperator& b) { return a += b; }
  friend QuantumOperator operator-(QuantumOperator a, const QuantumOperator& b) { return a -= b; }
  friend QuantumOperator operator*(const QuantumOperator& a, const QuantumOperator& b);
  friend QuantumOperator operator*(QuantumOperator a, const Rational& c);
  friend QuantumOperator operator*(QuantumOperator a, const MultiPoly& c);
  friend bool operator==(const QuantumOperator& a, const QuantumOperator& b);

  QuantumOperator subs(int var, const MultiPoly& value) const;
  // M^{(x)N} X M^{(x)N} for a single-site permutation matrix M.
  QuantumOperator conjugate_sites(const OpMatrix& m) const;
  // If *this = c * o for a rational c, returns c (nullopt otherwise or when o = 0).
  std::optional<Rational> ratio_to(const QuantumOperator& o) const;

  std::string index_label(int composite) const;
  // One line per nonzero entry.
  std::string dump() const;

 private:
  void check_shape(const QuantumOperator& o) const;

  RingPtr ring_;
  int r_ = 0;
  int n_ = 0;
  int dim_ = 0;
  std::vector<std::map<int, MultiPoly>> rows_;
};

QuantumOperator commutator(const QuantumOperator& a, const QuantumOperator& b);

// tr_a D_a R_a1(x) ... R_aN(x) with the bold R.
QuantumOperator transfer_matrix(const ChainSpec& spec, const std::string& var = "x");

enum class QFamily { kSpinor, kFund, kFundBar, kFundI, kFundBarI };
const char* qfamily_name(QFamily f);
QFamily parse_qfamily(const std::string& name);

struct QSelector {
  QFamily family = QFamily::kSpinor;
  std::vector<int> minus;  // spinor: positions of the minus signs in alpha
  int node = 0;            // fund-i, fund-bar-i: 1 <= i <= r-1

  std::string label() const;
};

struct QResult {
  QuantumOperator op;
  Rational normalization;  // trace of the identity that was divided out
};

// Regularised oscillator trace of the degenerate Lax monodromy, divided by
// its trace of the identity. kDivergentTrace names a mode of weight 1.
QResult q_operator(const ChainSpec& spec, const QSelector& sel, const std::string& var = "z");

// (z+1)^N times the identity.
QuantumOperator q_zero(const ChainSpec& spec, const std::string& var = "z");

// [L(z), D (x) D_s] = 0 (spinor) or with D_f (fund), symbolic in the twists:
// every oscillator monomial in L_ab carries charge D_b / D_a.
CheckReport check_absorption(int r, bool fundamental);

// Pairwise commutators of T(x), T(y) and the listed Q-operators at x, y.
CheckReport check_commuting(const ChainSpec& spec, const std::vector<QSelector>& qs, bool with_transfer = true);

enum class QQRelation { kSpinor1, kSpinor2, kFund };
const char* qq_name(QQRelation r);

struct QQOptions {
  bool spinor1 = true;
  bool spinor2 = true;
  bool fund = true;
  // replaces Q_s(z;{1}) in spinor1 by Q_s(z;{3}) (mutation)
  bool wrong_node = false;
  bool check_commuting = true;
};

// Rank 4. Q's are evaluated at z + u + c with z, u formal; A is read off from
// spinor1 and the other relations are compared to it. A single rational per
// relation may reconcile the trace normalizations; it is recorded in notes.
CheckReport qq_check(const ChainSpec& spec, const QQOptions& opt = {});

}  // namespace osclax
