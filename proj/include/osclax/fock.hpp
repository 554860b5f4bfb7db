#pragma once

#include <map>
#include <vector>

#include "osclax/algebra.hpp"

namespace osclax {

// Truncated Fock representation a|k> = k|k-1>, ad|k> = |k+1>, occupations
// 0..cutoff per mode. Sparse rows; index is row-major over the mode list.
class FockOperator {
 public:
  FockOperator(int cutoff, std::vector<int> modes);
  static FockOperator identity(int cutoff, std::vector<int> modes);

  int cutoff() const { return cutoff_; }
  const std::vector<int>& modes() const { return modes_; }
  int dim() const { return dim_; }

  Rational at(int row, int col) const;
  void add(int row, int col, const Rational& v);
  const std::map<int, Rational>& row(int r) const { return rows_[static_cast<std::size_t>(r)]; }

  std::vector<int> occupation(int index) const;
  int index_of(const std::vector<int>& occ) const;
  // True when every occupation of the basis state is <= bound.
  bool within(int index, int bound) const;

  FockOperator operator*(const FockOperator& o) const;
  FockOperator operator+(const FockOperator& o) const;
  FockOperator operator-(const FockOperator& o) const;
  FockOperator operator*(const Rational& c) const;
  bool is_zero() const;

  // Compares entries whose row state is within row_bound and column state
  // within col_bound.
  bool equal_on(const FockOperator& o, int row_bound, int col_bound) const;

  // exp of a nilpotent operator (sum until the powers vanish).
  FockOperator exp_nilpotent() const;

 private:
  void check_shape(const FockOperator& o) const;

  int cutoff_;
  std::vector<int> modes_;
  int dim_;
  std::vector<std::map<int, Rational>> rows_;
};

// Requires cutoff >= the largest single-mode power in e. When modes is empty
// the modes used by e are taken.
FockOperator to_truncated_fock(const AlgebraElement& e, int cutoff, const std::map<int, Rational>& eval,
                               std::vector<int> modes = {});

}  // namespace osclax
