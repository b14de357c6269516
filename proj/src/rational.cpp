#include "flagcert/rational.hpp"

#include <cctype>
#include <cmath>

#include "flagcert/error.hpp"

namespace flagcert {

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
  Integer v(std::string(s), 10);
  return negative ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) throw ParseError("bad denominator in '" + std::string(text) + "'");
    Integer den(std::string(den_text), 10);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw ParseError("bad decimal '" + std::string(text) + "'");
    }
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    Rational r(digits, scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }
  return Rational(parse_integer(text));
}

Rational nearest_rational(double x, const Integer& max_den) {
  if (!std::isfinite(x)) throw DomainError("cannot round a non-finite value");
  if (max_den < 1) throw DomainError("denominator bound must be at least 1");
  Rational target(x);  // exact binary value
  bool negative = target < 0;
  if (negative) target = -target;

  // Convergents p/q with (p0/q0, p1/q1) the last two.
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational rest = target;
  while (true) {
    Integer a = rest.get_num() / rest.get_den();
    Integer q2 = q0 + a * q1;
    if (q2 > max_den) {
      Integer t = (max_den - q0) / q1;
      Rational semi(p0 + t * p1, q0 + t * q1);
      semi.canonicalize();
      Rational conv(p1, q1);
      conv.canonicalize();
      Rational best = abs(semi - target) < abs(conv - target) ? semi : conv;
      return negative ? Rational(-best) : best;
    }
    Integer p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Rational frac = rest - Rational(a);
    if (frac == 0) break;
    rest = 1 / frac;
  }
  Rational exact(p1, q1);
  exact.canonicalize();
  return negative ? Rational(-exact) : exact;
}

double to_double(const Rational& x) { return x.get_d(); }

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool RationalMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

bool RationalMatrix::is_diagonal() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw DomainError("matrix product dimension mismatch");
  RationalMatrix c(a.rows_, b.cols_);
  Rational term;
  for (int i = 0; i < a.rows_; ++i) {
    for (int k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols_; ++j) {
        if (b(k, j) == 0) continue;
        term = aik * b(k, j);
        c(i, j) += term;
      }
    }
  }
  return c;
}

Rational frobenius(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("inner product dimension mismatch");
  Rational sum = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0 && b(i, j) != 0) sum += a(i, j) * b(i, j);
  return sum;
}

}  // namespace flagcert
