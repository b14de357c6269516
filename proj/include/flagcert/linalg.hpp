#pragma once

#include <optional>
#include <vector>

#include "flagcert/rational.hpp"

namespace flagcert {

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
std::vector<int> rref(RationalMatrix& a);

/// Columns form a basis of {x : A x = 0}. Each basis vector has a 1 in one
/// free coordinate and 0 in the others.
RationalMatrix null_space(const RationalMatrix& a);

/// Some solution of A x = b (free variables set to zero), or nothing if the
/// system is inconsistent.
std::optional<std::vector<Rational>> solve_linear(const RationalMatrix& a, const std::vector<Rational>& b);

/// Inverse of a square matrix; throws DomainError when singular.
RationalMatrix inverse(const RationalMatrix& a);

/// Symmetric congruence A = M diag(d) Mᵀ. M is a row permutation of a unit
/// lower triangular matrix; pivots are taken on nonzero diagonal entries.
struct Congruence {
  RationalMatrix m;
  std::vector<Rational> d;
};

/// Fails (returns nothing) when a zero pivot has a nonzero off-diagonal
/// entry, which means A is indefinite. Otherwise every entry of d is exact.
std::optional<Congruence> ldlt(const RationalMatrix& a);

/// Exact positive semidefiniteness test for a symmetric rational matrix.
bool is_psd(const RationalMatrix& a);

}  // namespace flagcert
