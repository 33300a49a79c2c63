#pragma once
// Exact scalars: rationals (q fixed) or reduced rational functions in an
// indeterminate q.  Polynomials in X, interpolation, linear solving.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hermlab {

// Integer polynomial, ascending coefficients, no trailing zeros (zero = empty).
using ZPoly = std::vector<mpz_class>;

namespace zpoly {
void trim(ZPoly& a);
ZPoly add(const ZPoly& a, const ZPoly& b);
ZPoly sub(const ZPoly& a, const ZPoly& b);
ZPoly mul(const ZPoly& a, const ZPoly& b);
ZPoly scale(const ZPoly& a, const mpz_class& c);
mpz_class content(const ZPoly& a);  // nonnegative
// Exact division a / b over Z[x]; returns false if b does not divide a.
bool divides(const ZPoly& a, const ZPoly& b, ZPoly* quot);
ZPoly gcd(const ZPoly& a, const ZPoly& b);  // leading coefficient > 0
mpz_class eval(const ZPoly& a, const mpz_class& x);
mpq_class eval(const ZPoly& a, const mpq_class& x);
std::string to_string(const ZPoly& a, const char* var = "q");
}  // namespace zpoly

class ExactScalar {
 public:
  ExactScalar() = default;  // concrete zero
  ExactScalar(long v) : q_(v) {}  // NOLINT: implicit on purpose
  explicit ExactScalar(const mpq_class& v) : q_(v) { q_.canonicalize(); }
  static ExactScalar rational(long num, long den);
  static ExactScalar indeterminate();  // q as a symbol
  static ExactScalar ratio(ZPoly num, ZPoly den);

  bool symbolic() const { return sym_; }
  bool is_zero() const;
  bool is_one() const;
  const mpq_class& value() const;  // concrete only
  const ZPoly& num() const { return num_; }
  const ZPoly& den() const { return den_; }

  ExactScalar operator-() const;
  friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b);
  ExactScalar& operator+=(const ExactScalar& b) { return *this = *this + b; }
  ExactScalar& operator-=(const ExactScalar& b) { return *this = *this - b; }
  ExactScalar& operator*=(const ExactScalar& b) { return *this = *this * b; }
  ExactScalar& operator/=(const ExactScalar& b) { return *this = *this / b; }
  friend bool operator==(const ExactScalar& a, const ExactScalar& b);
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

  ExactScalar pow(long e) const;
  // Substitute q := value (symbolic), identity on concrete values.
  ExactScalar at(long q) const;
  // "num/den" with decimal integers; symbolic values print polynomials in q.
  std::string str() const;

 private:
  void promote();  // concrete -> symbolic constant
  void reduce();
  bool sym_ = false;
  mpq_class q_;
  ZPoly num_, den_;
};

std::ostream& operator<<(std::ostream& os, const ExactScalar& x);

// The value of q in the chosen mode.  Everything q-dependent goes through here.
class QField {
 public:
  static QField concrete(long q) { return QField(false, q); }
  static QField symbolic() { return QField(true, 0); }
  bool symbolic_mode() const { return sym_; }
  long q_int() const;  // concrete only
  ExactScalar q() const;
  ExactScalar q_pow(long e) const;       // q^e
  ExactScalar negq_pow(long e) const;    // (-q)^e
  std::string tag() const;               // "q=3" or "symbolic"

 private:
  QField(bool s, long q) : sym_(s), q_(q) {}
  bool sym_;
  long q_;
};

class XPolynomial {
 public:
  XPolynomial() = default;
  explicit XPolynomial(std::vector<ExactScalar> c);
  static XPolynomial constant(const ExactScalar& c);
  static XPolynomial monomial(const ExactScalar& c, size_t deg);
  const std::vector<ExactScalar>& coeffs() const { return c_; }
  long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  ExactScalar coeff(size_t i) const { return i < c_.size() ? c_[i] : ExactScalar(0); }
  ExactScalar eval(const ExactScalar& x) const;
  XPolynomial derivative() const;
  friend XPolynomial operator+(const XPolynomial& a, const XPolynomial& b);
  friend XPolynomial operator-(const XPolynomial& a, const XPolynomial& b);
  friend XPolynomial operator*(const XPolynomial& a, const XPolynomial& b);
  friend XPolynomial operator*(const ExactScalar& s, const XPolynomial& a);
  friend bool operator==(const XPolynomial& a, const XPolynomial& b);
  std::string str() const;

 private:
  void trim();
  std::vector<ExactScalar> c_;
};

using Matrix = std::vector<std::vector<ExactScalar>>;
using Vector = std::vector<ExactScalar>;

XPolynomial interpolate(const std::vector<std::pair<ExactScalar, ExactScalar>>& pts);
Vector solve_linear(const Matrix& M, const Vector& v);
ExactScalar derivative_at_one(const XPolynomial& p);  // -p'(1)

Matrix mat_mul(const Matrix& a, const Matrix& b);
Vector mat_vec(const Matrix& a, const Vector& v);
ExactScalar determinant(Matrix m);

}  // namespace hermlab
