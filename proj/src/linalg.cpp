#include "gptent/linalg.hpp"

#include <cassert>
#include <utility>

namespace gptent::linalg {

Echelon row_reduce(Matrix m, std::size_t cols) {
  Echelon out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.size() && is_zero(m[pivot][col])) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[row], m[pivot]);
    Rational inv = 1 / m[row][col];
    for (std::size_t c = col; c < cols; ++c) m[row][c] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || is_zero(m[r][col])) continue;
      Rational factor = m[r][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= factor * m[row][c];
    }
    out.pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const Matrix& m, std::size_t cols) { return row_reduce(m, cols).pivots.size(); }

Solution solve(const Matrix& a, const RationalVector& b, std::size_t cols) {
  assert(a.size() == b.size());
  Matrix augmented = a;
  for (std::size_t r = 0; r < augmented.size(); ++r) {
    augmented[r].resize(cols);
    augmented[r].push_back(b[r]);
  }
  Echelon e = row_reduce(std::move(augmented), cols + 1);
  Solution s;
  if (!e.pivots.empty() && e.pivots.back() == cols) return s;  // 0 = nonzero row
  s.consistent = true;
  s.unique = e.pivots.size() == cols;
  s.particular.assign(cols, Rational(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) s.particular[e.pivots[r]] = e.reduced[r][cols];
  return s;
}

Matrix nullspace(const Matrix& a, std::size_t cols) {
  Echelon e = row_reduce(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  Matrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

Matrix transpose(const Matrix& m, std::size_t cols) {
  Matrix t(cols, RationalVector(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) t[c][r] = m[r][c];
  return t;
}

RationalVector add(const RationalVector& a, const RationalVector& b) {
  RationalVector out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

RationalVector sub(const RationalVector& a, const RationalVector& b) {
  RationalVector out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

RationalVector scale(const RationalVector& a, const Rational& s) {
  RationalVector out(a);
  for (auto& x : out) x *= s;
  return out;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

bool is_zero_vector(const RationalVector& a) {
  for (const auto& x : a)
    if (!is_zero(x)) return false;
  return true;
}

}  // namespace gptent::linalg
