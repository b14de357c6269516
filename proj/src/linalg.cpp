#include "flagcert/linalg.hpp"

#include <algorithm>
#include <numeric>

#include "flagcert/error.hpp"

namespace flagcert {

std::vector<int> rref(RationalMatrix& a) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < a.cols() && row < a.rows(); ++col) {
    int p = row;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (int j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    const Rational inv = 1 / a(row, col);
    for (int j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      const Rational f = a(i, col);
      for (int j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

RationalMatrix null_space(const RationalMatrix& a) {
  RationalMatrix r = a;
  const std::vector<int> pivots = rref(r);
  std::vector<bool> is_pivot(static_cast<size_t>(a.cols()), false);
  for (int p : pivots) is_pivot[static_cast<size_t>(p)] = true;
  std::vector<int> free;
  for (int j = 0; j < a.cols(); ++j)
    if (!is_pivot[static_cast<size_t>(j)]) free.push_back(j);
  RationalMatrix basis(a.cols(), static_cast<int>(free.size()));
  for (size_t k = 0; k < free.size(); ++k) {
    const int f = free[k];
    basis(f, static_cast<int>(k)) = 1;
    for (size_t i = 0; i < pivots.size(); ++i) basis(pivots[i], static_cast<int>(k)) = -r(static_cast<int>(i), f);
  }
  return basis;
}

std::optional<std::vector<Rational>> solve_linear(const RationalMatrix& a, const std::vector<Rational>& b) {
  if (static_cast<int>(b.size()) != a.rows()) throw DomainError("right-hand side length mismatch");
  RationalMatrix aug(a.rows(), a.cols() + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[static_cast<size_t>(i)];
  }
  const std::vector<int> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  std::vector<Rational> x(static_cast<size_t>(a.cols()), Rational(0));
  for (size_t i = 0; i < pivots.size(); ++i) x[static_cast<size_t>(pivots[i])] = aug(static_cast<int>(i), a.cols());
  return x;
}

RationalMatrix inverse(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw DomainError("inverse of a non-square matrix");
  const int n = a.rows();
  RationalMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  const std::vector<int> pivots = rref(aug);
  if (static_cast<int>(pivots.size()) < n || (n > 0 && pivots[static_cast<size_t>(n - 1)] != n - 1)) {
    throw DomainError("matrix is singular");
  }
  RationalMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

std::optional<Congruence> ldlt(const RationalMatrix& a) {
  if (!a.is_symmetric()) throw DomainError("LDLT needs a symmetric matrix");
  const int n = a.rows();
  RationalMatrix work = a;
  // order[k] = original index eliminated at step k.
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  RationalMatrix l(n, n);  // indexed by elimination step (rows, cols)
  std::vector<Rational> d(static_cast<size_t>(n), Rational(0));

  for (int k = 0; k < n; ++k) {
    // Pivot on the remaining index with the largest |diagonal| to keep
    // numbers small; all-zero remaining diagonal means the rest must vanish.
    int best = -1;
    for (int t = k; t < n; ++t) {
      const Rational& v = work(order[static_cast<size_t>(t)], order[static_cast<size_t>(t)]);
      if (v != 0 && (best < 0 || abs(v) > abs(work(order[static_cast<size_t>(best)], order[static_cast<size_t>(best)]))))
        best = t;
    }
    if (best < 0) {
      for (int s = k; s < n; ++s)
        for (int t = k; t < n; ++t)
          if (work(order[static_cast<size_t>(s)], order[static_cast<size_t>(t)]) != 0) return std::nullopt;
      for (int s = k; s < n; ++s) l(s, s) = 1;
      break;
    }
    std::swap(order[static_cast<size_t>(k)], order[static_cast<size_t>(best)]);
    for (int j = 0; j < k; ++j) std::swap(l(k, j), l(best, j));
    const int p = order[static_cast<size_t>(k)];
    const Rational piv = work(p, p);
    d[static_cast<size_t>(k)] = piv;
    l(k, k) = 1;
    for (int s = k + 1; s < n; ++s) {
      const int i = order[static_cast<size_t>(s)];
      l(s, k) = work(i, p) / piv;
    }
    for (int s = k + 1; s < n; ++s) {
      const int i = order[static_cast<size_t>(s)];
      if (work(i, p) == 0) continue;
      for (int t = k + 1; t < n; ++t) {
        const int j = order[static_cast<size_t>(t)];
        work(i, j) -= l(s, k) * work(p, j);
      }
    }
  }
  // A[order, order] = L D Lᵀ, so A = M D Mᵀ with M[order[s], :] = L[s, :].
  Congruence c;
  c.m = RationalMatrix(n, n);
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < n; ++j) c.m(order[static_cast<size_t>(s)], j) = l(s, j);
  c.d = std::move(d);
  return c;
}

bool is_psd(const RationalMatrix& a) {
  if (!a.is_symmetric()) return false;
  const int n = a.rows();
  // Clear denominators, then fraction-free symmetric elimination: after each
  // step the remaining entries are principal-minor ratios, so division by
  // the previous pivot is exact.
  Integer scale = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), a(i, j).get_den_mpz_t());
  std::vector<Integer> m(static_cast<size_t>(n) * n);
  auto at = [&](int i, int j) -> Integer& { return m[static_cast<size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) at(i, j) = a(i, j).get_num() * (scale / a(i, j).get_den());

  std::vector<int> rest(static_cast<size_t>(n));
  std::iota(rest.begin(), rest.end(), 0);
  Integer prev = 1, t;
  while (!rest.empty()) {
    int best = -1;
    for (size_t k = 0; k < rest.size(); ++k) {
      const Integer& d = at(rest[k], rest[k]);
      if (d < 0) return false;
      if (d > 0 && (best < 0 || mpz_sizeinbase(d.get_mpz_t(), 2) < mpz_sizeinbase(at(rest[static_cast<size_t>(best)], rest[static_cast<size_t>(best)]).get_mpz_t(), 2)))
        best = static_cast<int>(k);
    }
    if (best < 0) {
      for (int i : rest)
        for (int j : rest)
          if (at(i, j) != 0) return false;
      return true;
    }
    const int p = rest[static_cast<size_t>(best)];
    rest.erase(rest.begin() + best);
    const Integer piv = at(p, p);
    for (size_t x = 0; x < rest.size(); ++x) {
      const int i = rest[x];
      for (size_t y = x; y < rest.size(); ++y) {
        const int j = rest[y];
        Integer& v = at(i, j);
        v *= piv;
        mpz_mul(t.get_mpz_t(), at(i, p).get_mpz_t(), at(p, j).get_mpz_t());
        v -= t;
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        if (i != j) at(j, i) = v;
      }
    }
    prev = piv;
  }
  return true;
}

}  // namespace flagcert
