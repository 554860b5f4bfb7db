#pragma once

// Internal helper shared by the catalog and the verifier.

#include <vector>

#include "osclax/error.hpp"
#include "osclax/lax.hpp"

namespace osclax::detail {

// Small dense block of oscillator entries in display order.
struct Dense {
  ContextPtr ctx;
  int rows = 0, cols = 0;
  std::vector<AlgebraElement> v;

  Dense(ContextPtr c, int r, int k) : ctx(std::move(c)), rows(r), cols(k), v(static_cast<std::size_t>(r * k), AlgebraElement(ctx)) {}

  AlgebraElement& at(int i, int j) { return v[static_cast<std::size_t>(i * cols + j)]; }
  const AlgebraElement& at(int i, int j) const { return v[static_cast<std::size_t>(i * cols + j)]; }

  static Dense scalar_identity(const ContextPtr& c, int n, const MultiPoly& p) {
    Dense d(c, n, n);
    for (int i = 0; i < n; ++i) d.at(i, i) = AlgebraElement(c, p);
    return d;
  }
  static Dense identity(const ContextPtr& c, int n) { return scalar_identity(c, n, MultiPoly(c->ring, Rational(1))); }
  static Dense exchange(const ContextPtr& c, int n) {
    Dense d(c, n, n);
    for (int i = 0; i < n; ++i) d.at(i, n - 1 - i) = AlgebraElement(c, Rational(1));
    return d;
  }
  static Dense scalar(const ContextPtr& c, const AlgebraElement& e) {
    Dense d(c, 1, 1);
    d.at(0, 0) = e;
    return d;
  }

  Dense transpose() const {
    Dense d(ctx, cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) d.at(j, i) = at(i, j);
    return d;
  }
  AlgebraElement as_scalar() const {
    require(rows == 1 && cols == 1, ErrorCode::kInvalidArgument, "block is not 1x1");
    return at(0, 0);
  }
};

inline Dense operator*(const Dense& a, const Dense& b) {
  require(a.cols == b.rows, ErrorCode::kInvalidArgument, "block shape mismatch");
  Dense d(a.ctx, a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const auto& x = a.at(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < b.cols; ++j)
        if (!b.at(k, j).is_zero()) d.at(i, j) += x * b.at(k, j);
    }
  return d;
}

inline Dense operator+(Dense a, const Dense& b) {
  require(a.rows == b.rows && a.cols == b.cols, ErrorCode::kInvalidArgument, "block shape mismatch");
  for (std::size_t k = 0; k < a.v.size(); ++k) a.v[k] += b.v[k];
  return a;
}

inline Dense operator-(const Dense& a) {
  Dense d = a;
  for (auto& e : d.v) e = -e;
  return d;
}

inline Dense operator-(const Dense& a, const Dense& b) { return a + (-b); }

inline Dense operator*(Dense a, const Rational& c) {
  for (auto& e : a.v) e *= c;
  return a;
}

inline Dense operator*(Dense a, const MultiPoly& c) {
  for (auto& e : a.v) e *= c;
  return a;
}

// Scalar element times block, element on the left.
inline Dense operator*(const AlgebraElement& s, const Dense& b) {
  Dense d(b.ctx, b.rows, b.cols);
  for (std::size_t k = 0; k < b.v.size(); ++k)
    if (!b.v[k].is_zero()) d.v[k] = s * b.v[k];
  return d;
}

// Block matrix into a rank-r OpMatrix. grid[i][j] may be empty (rows == 0)
// meaning a zero block.
inline OpMatrix assemble(const ContextPtr& ctx, int r, const std::vector<int>& sizes,
                  const std::vector<std::vector<const Dense*>>& grid) {
  int total = 0;
  for (int s : sizes) total += s;
  require(total == 2 * r, ErrorCode::kInvalidArgument, "block sizes do not add up");
  OpMatrix m(ctx, {r});
  int ro = 0;
  for (std::size_t bi = 0; bi < sizes.size(); ++bi) {
    int co = 0;
    for (std::size_t bj = 0; bj < sizes.size(); ++bj) {
      const Dense* d = grid[bi][bj];
      if (d) {
        require(d->rows == sizes[bi] && d->cols == sizes[bj], ErrorCode::kInvalidArgument, "block shape mismatch");
        for (int i = 0; i < d->rows; ++i)
          for (int j = 0; j < d->cols; ++j)
            if (!d->at(i, j).is_zero()) m.set(ro + i, co + j, d->at(i, j));
      }
      co += sizes[bj];
    }
    ro += sizes[bi];
  }
  return m;
}

inline Dense to_dense(const SpinorBlocks& b, bool bar) {
  const auto& src = bar ? b.abar : b.a;
  int m = static_cast<int>(src.size());
  ContextPtr ctx = m ? src[0][0].context() : nullptr;
  Dense d(ctx, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) d.at(i, j) = src[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return d;
}


}  // namespace osclax::detail
