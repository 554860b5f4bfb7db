#include "osclax/fock.hpp"

#include <algorithm>

#include "osclax/error.hpp"

namespace osclax {

FockOperator::FockOperator(int cutoff, std::vector<int> modes) : cutoff_(cutoff), modes_(std::move(modes)) {
  require(cutoff >= 0, ErrorCode::kInvalidArgument, "negative cutoff");
  long long d = 1;
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    d *= cutoff + 1;
    require(d <= 4000000, ErrorCode::kInvalidArgument, "truncated Fock space too large");
  }
  dim_ = static_cast<int>(d);
  rows_.resize(static_cast<std::size_t>(dim_));
}

FockOperator FockOperator::identity(int cutoff, std::vector<int> modes) {
  FockOperator f(cutoff, std::move(modes));
  for (int i = 0; i < f.dim_; ++i) f.rows_[static_cast<std::size_t>(i)].emplace(i, Rational(1));
  return f;
}

Rational FockOperator::at(int row, int col) const {
  const auto& r = rows_.at(static_cast<std::size_t>(row));
  auto it = r.find(col);
  return it == r.end() ? Rational(0) : it->second;
}

void FockOperator::add(int row, int col, const Rational& v) {
  if (v.is_zero()) return;
  auto& r = rows_.at(static_cast<std::size_t>(row));
  auto [it, inserted] = r.try_emplace(col, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) r.erase(it);
  }
}

std::vector<int> FockOperator::occupation(int index) const {
  std::vector<int> occ(modes_.size());
  for (std::size_t k = modes_.size(); k-- > 0;) {
    occ[k] = index % (cutoff_ + 1);
    index /= cutoff_ + 1;
  }
  return occ;
}

int FockOperator::index_of(const std::vector<int>& occ) const {
  int idx = 0;
  for (int n : occ) idx = idx * (cutoff_ + 1) + n;
  return idx;
}

bool FockOperator::within(int index, int bound) const {
  for (int n : occupation(index))
    if (n > bound) return false;
  return true;
}

void FockOperator::check_shape(const FockOperator& o) const {
  require(cutoff_ == o.cutoff_ && modes_ == o.modes_, ErrorCode::kContextMismatch,
          "Fock operators on different truncated spaces");
}

FockOperator FockOperator::operator*(const FockOperator& o) const {
  check_shape(o);
  FockOperator r(cutoff_, modes_);
  for (int i = 0; i < dim_; ++i)
    for (const auto& [k, v] : rows_[static_cast<std::size_t>(i)])
      for (const auto& [j, w] : o.rows_[static_cast<std::size_t>(k)]) r.add(i, j, v * w);
  return r;
}

FockOperator FockOperator::operator+(const FockOperator& o) const {
  check_shape(o);
  FockOperator r(*this);
  for (int i = 0; i < dim_; ++i)
    for (const auto& [j, w] : o.rows_[static_cast<std::size_t>(i)]) r.add(i, j, w);
  return r;
}

FockOperator FockOperator::operator-(const FockOperator& o) const { return *this + o * Rational(-1); }

FockOperator FockOperator::operator*(const Rational& c) const {
  FockOperator r(cutoff_, modes_);
  if (c.is_zero()) return r;
  for (int i = 0; i < dim_; ++i)
    for (const auto& [j, w] : rows_[static_cast<std::size_t>(i)]) r.rows_[static_cast<std::size_t>(i)].emplace(j, w * c);
  return r;
}

bool FockOperator::is_zero() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const auto& r) { return r.empty(); });
}

bool FockOperator::equal_on(const FockOperator& o, int row_bound, int col_bound) const {
  check_shape(o);
  for (int i = 0; i < dim_; ++i) {
    if (!within(i, row_bound)) continue;
    std::map<int, Rational> diff = rows_[static_cast<std::size_t>(i)];
    for (const auto& [j, w] : o.rows_[static_cast<std::size_t>(i)]) diff[j] -= w;
    for (const auto& [j, w] : diff)
      if (!w.is_zero() && within(j, col_bound)) return false;
  }
  return true;
}

FockOperator FockOperator::exp_nilpotent() const {
  FockOperator out = identity(cutoff_, modes_);
  FockOperator term = out;
  for (int k = 1; k <= dim_ + 1; ++k) {
    term = (term * *this) * Rational(1, k);
    if (term.is_zero()) return out;
    out = out + term;
  }
  fail(ErrorCode::kStructural, "exp_nilpotent: operator is not nilpotent");
}

FockOperator to_truncated_fock(const AlgebraElement& e, int cutoff, const std::map<int, Rational>& eval,
                               std::vector<int> modes) {
  if (modes.empty()) modes = e.modes_used();
  for (const auto& [mono, c] : e.terms()) {
    for (const auto& f : mono.factors()) {
      require(std::max(f.p, f.q) <= cutoff, ErrorCode::kInvalidArgument,
              "cutoff below oscillator power of the element");
      require(std::find(modes.begin(), modes.end(), f.mode) != modes.end(), ErrorCode::kInvalidArgument,
              "element uses a mode outside the truncated space");
    }
  }
  FockOperator out(cutoff, modes);
  for (const auto& [mono, c] : e.terms()) {
    Rational coef = c.evaluate(eval);
    if (coef.is_zero()) continue;
    std::vector<std::pair<int, int>> pq(modes.size(), {0, 0});
    for (const auto& f : mono.factors()) {
      auto pos = static_cast<std::size_t>(std::find(modes.begin(), modes.end(), f.mode) - modes.begin());
      pq[pos] = {f.p, f.q};
    }
    for (int col = 0; col < out.dim(); ++col) {
      std::vector<int> occ = out.occupation(col);
      Rational v = coef;
      bool alive = true;
      for (std::size_t k = 0; k < occ.size() && alive; ++k) {
        auto [p, q] = pq[k];
        if (occ[k] < q) {
          alive = false;
          break;
        }
        for (int t = 0; t < q; ++t) v *= Rational(occ[k] - t);
        occ[k] += p - q;
        if (occ[k] > cutoff) alive = false;
      }
      if (alive) out.add(out.index_of(occ), col, v);
    }
  }
  return out;
}

}  // namespace osclax
