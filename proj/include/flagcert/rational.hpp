#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace flagcert {

/// Exact rational number. GMP keeps every value in lowest terms with a
/// positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

/// "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& x);

/// Accepts "p/q", "p", and terminating decimals such as "-0.25".
/// Throws ParseError on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued fractions, ties toward the convergent).
Rational nearest_rational(double x, const Integer& max_den);

double to_double(const Rational& x);

/// Binomial coefficient as a plain integer; only used for small arguments.
std::int64_t binomial(int n, int k);

/// Dense row-major matrix of rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  static RationalMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const Rational& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  RationalMatrix transpose() const;
  bool is_symmetric() const;
  bool is_diagonal() const;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

/// Frobenius inner product sum_ij a_ij b_ij.
Rational frobenius(const RationalMatrix& a, const RationalMatrix& b);

}  // namespace flagcert
