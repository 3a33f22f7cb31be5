#ifndef GPTENT_LINALG_HPP
#define GPTENT_LINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "gptent/rational.hpp"

// Small dense exact linear algebra over the rationals. Matrices are row-major
// vectors of rows; sizes here are desk scale (tens of rows and columns).
namespace gptent::linalg {

using Matrix = std::vector<RationalVector>;

struct Echelon {
  Matrix reduced;                   // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

Echelon row_reduce(Matrix m, std::size_t cols);

std::size_t rank(const Matrix& m, std::size_t cols);

struct Solution {
  bool consistent = false;
  bool unique = false;
  RationalVector particular;  // valid when consistent; free variables set to 0
};

/// Solves a x = b for a with `cols` columns.
Solution solve(const Matrix& a, const RationalVector& b, std::size_t cols);

/// Basis of {x : a x = 0}.
Matrix nullspace(const Matrix& a, std::size_t cols);

Matrix transpose(const Matrix& m, std::size_t cols);

RationalVector add(const RationalVector& a, const RationalVector& b);
RationalVector sub(const RationalVector& a, const RationalVector& b);
RationalVector scale(const RationalVector& a, const Rational& s);
Rational dot(const RationalVector& a, const RationalVector& b);
bool is_zero_vector(const RationalVector& a);

}  // namespace gptent::linalg

#endif  // GPTENT_LINALG_HPP
