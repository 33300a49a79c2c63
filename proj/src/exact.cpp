#include "hermlab/exact.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace hermlab {

namespace zpoly {

void trim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ZPoly add(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] += a[i];
    if (i < b.size()) r[i] += b[i];
  }
  trim(r);
  return r;
}

ZPoly sub(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] += a[i];
    if (i < b.size()) r[i] -= b[i];
  }
  trim(r);
  return r;
}

ZPoly mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

ZPoly scale(const ZPoly& a, const mpz_class& c) {
  if (c == 0) return {};
  ZPoly r(a);
  for (auto& x : r) x *= c;
  return r;
}

mpz_class content(const ZPoly& a) {
  mpz_class g = 0;
  for (const auto& x : a) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

static ZPoly exact_div_scalar(const ZPoly& a, const mpz_class& c) {
  ZPoly r(a);
  for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
  return r;
}

bool divides(const ZPoly& a, const ZPoly& b, ZPoly* quot) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  if (a.empty()) {
    if (quot) quot->clear();
    return true;
  }
  if (a.size() < b.size()) return false;
  ZPoly r(a);
  ZPoly q(a.size() - b.size() + 1);
  const mpz_class& lb = b.back();
  for (size_t k = q.size(); k-- > 0;) {
    const mpz_class& top = r[k + b.size() - 1];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t())) return false;
    mpz_class c;
    mpz_divexact(c.get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
    q[k] = c;
    for (size_t j = 0; j < b.size(); ++j) r[k + j] -= c * b[j];
  }
  for (const auto& x : r)
    if (x != 0) return false;
  if (quot) {
    trim(q);
    *quot = std::move(q);
  }
  return true;
}

mpz_class eval(const ZPoly& a, const mpz_class& x) {
  mpz_class r = 0;
  for (size_t i = a.size(); i-- > 0;) r = r * x + a[i];
  return r;
}

mpq_class eval(const ZPoly& a, const mpq_class& x) {
  mpq_class r = 0;
  for (size_t i = a.size(); i-- > 0;) r = r * x + a[i];
  return r;
}

static mpz_class max_norm(const ZPoly& a) {
  mpz_class m = 0;
  for (const auto& x : a) {
    mpz_class t = abs(x);
    if (t > m) m = t;
  }
  return m;
}

static void make_lc_positive(ZPoly& a) {
  if (!a.empty() && a.back() < 0)
    for (auto& x : a) x = -x;
}

// Primitive PRS over Z[x]; inputs primitive and nonzero.
static ZPoly gcd_prs(ZPoly a, ZPoly b) {
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    // pseudo-remainder of a by b
    ZPoly r(a);
    const mpz_class lb = b.back();
    while (r.size() >= b.size() && !r.empty()) {
      const mpz_class lr = r.back();
      size_t shift = r.size() - b.size();
      for (auto& x : r) x *= lb;
      for (size_t j = 0; j < b.size(); ++j) r[shift + j] -= lr * b[j];
      trim(r);
    }
    if (!r.empty()) {
      mpz_class c = content(r);
      r = exact_div_scalar(r, c);
    }
    a = std::move(b);
    b = std::move(r);
  }
  make_lc_positive(a);
  return a;
}

// Heuristic gcd by evaluation at a large integer; verified by trial division.
static ZPoly gcd_pp(const ZPoly& a, const ZPoly& b) {
  if (a.size() == 1 || b.size() == 1) return {mpz_class(1)};
  mpz_class xi = 2 * std::min(max_norm(a), max_norm(b)) + 2;
  for (int attempt = 0; attempt < 6; ++attempt) {
    mpz_class ga = eval(a, xi), gb = eval(b, xi), g;
    mpz_gcd(g.get_mpz_t(), ga.get_mpz_t(), gb.get_mpz_t());
    ZPoly G;
    mpz_class half = xi / 2;
    while (g != 0) {
      mpz_class dgt;
      mpz_mod(dgt.get_mpz_t(), g.get_mpz_t(), xi.get_mpz_t());
      if (dgt > half) dgt -= xi;
      G.push_back(dgt);
      g = (g - dgt) / xi;
    }
    trim(G);
    if (!G.empty()) {
      G = exact_div_scalar(G, content(G));
      make_lc_positive(G);
      if (divides(a, G, nullptr) && divides(b, G, nullptr)) return G;
    }
    xi = xi * 73794 / 27011 + 1;
  }
  return gcd_prs(a, b);
}

ZPoly gcd(const ZPoly& a, const ZPoly& b) {
  if (a.empty()) {
    ZPoly r(b);
    make_lc_positive(r);
    return r;
  }
  if (b.empty()) return gcd(b, a);
  mpz_class ca = content(a), cb = content(b), c;
  mpz_gcd(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  // common power of x first: keeps the heuristic fast on Laurent-type data
  size_t za = 0, zb = 0;
  while (a[za] == 0) ++za;
  while (b[zb] == 0) ++zb;
  size_t z = std::min(za, zb);
  ZPoly pa(a.begin() + za, a.end()), pb(b.begin() + zb, b.end());
  pa = exact_div_scalar(pa, ca);
  pb = exact_div_scalar(pb, cb);
  ZPoly g = gcd_pp(pa, pb);
  g = scale(g, c);
  g.insert(g.begin(), z, mpz_class(0));
  return g;
}

std::string to_string(const ZPoly& a, const char* var) {
  if (a.empty()) return "0";
  std::string s;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] == 0) continue;
    mpz_class c = a[i];
    bool neg = c < 0;
    if (neg) c = -c;
    if (s.empty()) {
      if (neg) s += "-";
    } else {
      s += neg ? "-" : "+";
    }
    if (i == 0 || c != 1) s += c.get_str();
    if (i > 0) {
      if (c != 1) s += "*";
      s += var;
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

}  // namespace zpoly

// ---------------------------------------------------------------- scalar

ExactScalar ExactScalar::rational(long num, long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  return ExactScalar(mpq_class(num, den));
}

ExactScalar ExactScalar::indeterminate() { return ratio({0, 1}, {1}); }

ExactScalar ExactScalar::ratio(ZPoly num, ZPoly den) {
  ExactScalar r;
  r.sym_ = true;
  zpoly::trim(num);
  zpoly::trim(den);
  r.num_ = std::move(num);
  r.den_ = std::move(den);
  r.reduce();
  return r;
}

void ExactScalar::promote() {
  if (sym_) return;
  sym_ = true;
  num_ = {q_.get_num()};
  den_ = {q_.get_den()};
  zpoly::trim(num_);
  q_ = 0;
}

void ExactScalar::reduce() {
  if (den_.empty()) throw std::domain_error("zero denominator");
  if (num_.empty()) {
    den_ = {mpz_class(1)};
    return;
  }
  ZPoly g = zpoly::gcd(num_, den_);
  if (!(g.size() == 1 && g[0] == 1)) {
    zpoly::divides(num_, g, &num_);
    zpoly::divides(den_, g, &den_);
  }
  if (den_.back() < 0) {
    for (auto& x : num_) x = -x;
    for (auto& x : den_) x = -x;
  }
}

bool ExactScalar::is_zero() const { return sym_ ? num_.empty() : q_ == 0; }

bool ExactScalar::is_one() const {
  if (!sym_) return q_ == 1;
  return num_.size() == 1 && den_.size() == 1 && num_[0] == den_[0];
}

const mpq_class& ExactScalar::value() const {
  if (sym_) throw std::logic_error("value() on a symbolic scalar");
  return q_;
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar r(*this);
  if (sym_)
    for (auto& x : r.num_) x = -x;
  else
    r.q_ = -r.q_;
  return r;
}

ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
  if (!a.sym_ && !b.sym_) return ExactScalar(mpq_class(a.q_ + b.q_));
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  ExactScalar x(a), y(b);
  x.promote();
  y.promote();
  if (x.den_ == y.den_) return ExactScalar::ratio(zpoly::add(x.num_, y.num_), x.den_);
  return ExactScalar::ratio(zpoly::add(zpoly::mul(x.num_, y.den_), zpoly::mul(y.num_, x.den_)),
                            zpoly::mul(x.den_, y.den_));
}

ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return a + (-b); }

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
  if (!a.sym_ && !b.sym_) return ExactScalar(mpq_class(a.q_ * b.q_));
  ExactScalar x(a), y(b);
  x.promote();
  y.promote();
  if (x.num_.empty() || y.num_.empty()) {
    ExactScalar z;
    z.promote();
    return z;
  }
  // cross-reduce first so the products stay small
  ZPoly g1 = zpoly::gcd(x.num_, y.den_), g2 = zpoly::gcd(y.num_, x.den_);
  ZPoly n1, d1, n2, d2;
  zpoly::divides(x.num_, g1, &n1);
  zpoly::divides(y.den_, g1, &d2);
  zpoly::divides(y.num_, g2, &n2);
  zpoly::divides(x.den_, g2, &d1);
  ExactScalar r;
  r.sym_ = true;
  r.num_ = zpoly::mul(n1, n2);
  r.den_ = zpoly::mul(d1, d2);
  if (r.den_.back() < 0) {
    for (auto& c : r.num_) c = -c;
    for (auto& c : r.den_) c = -c;
  }
  return r;
}

ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (!a.sym_ && !b.sym_) return ExactScalar(mpq_class(a.q_ / b.q_));
  ExactScalar inv(b);
  inv.promote();
  std::swap(inv.num_, inv.den_);
  if (inv.den_.back() < 0) {
    for (auto& c : inv.num_) c = -c;
    for (auto& c : inv.den_) c = -c;
  }
  return a * inv;
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
  if (!a.sym_ && !b.sym_) return a.q_ == b.q_;
  ExactScalar x(a), y(b);
  x.promote();
  y.promote();
  return x.num_ == y.num_ && x.den_ == y.den_;
}

ExactScalar ExactScalar::pow(long e) const {
  if (e < 0) return ExactScalar(1) / pow(-e);
  ExactScalar r(1), b(*this);
  if (sym_) r.promote();
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

ExactScalar ExactScalar::at(long q) const {
  if (!sym_) return *this;
  mpq_class x(q);
  mpq_class d = zpoly::eval(den_, x);
  if (d == 0) throw std::domain_error("pole at substituted q");
  return ExactScalar(mpq_class(zpoly::eval(num_, x) / d));
}

std::string ExactScalar::str() const {
  if (!sym_) return q_.get_str();
  std::string n = zpoly::to_string(num_);
  if (den_.size() == 1 && den_[0] == 1) return n;
  auto wrap = [](const ZPoly& p, const std::string& s) {
    size_t terms = 0;
    for (const auto& c : p) terms += c != 0;
    return terms > 1 ? "(" + s + ")" : s;
  };
  return wrap(num_, n) + "/" + wrap(den_, zpoly::to_string(den_));
}

std::ostream& operator<<(std::ostream& os, const ExactScalar& x) { return os << x.str(); }

// ---------------------------------------------------------------- field

long QField::q_int() const {
  if (sym_) throw std::logic_error("requires concrete q");
  return q_;
}

ExactScalar QField::q() const { return sym_ ? ExactScalar::indeterminate() : ExactScalar(q_); }

ExactScalar QField::q_pow(long e) const {
  if (!sym_) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(q_), static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? ExactScalar(mpq_class(mpz_class(1), p)) : ExactScalar(mpq_class(p));
  }
  ZPoly mono(static_cast<size_t>(e < 0 ? -e : e) + 1);
  mono.back() = 1;
  return e < 0 ? ExactScalar::ratio({1}, mono) : ExactScalar::ratio(mono, {1});
}

ExactScalar QField::negq_pow(long e) const {
  ExactScalar r = q_pow(e);
  return (e % 2 != 0) ? -r : r;
}

std::string QField::tag() const { return sym_ ? "symbolic" : "q=" + std::to_string(q_); }

// ---------------------------------------------------------------- X-polys

XPolynomial::XPolynomial(std::vector<ExactScalar> c) : c_(std::move(c)) { trim(); }

XPolynomial XPolynomial::constant(const ExactScalar& c) { return XPolynomial({c}); }

XPolynomial XPolynomial::monomial(const ExactScalar& c, size_t deg) {
  std::vector<ExactScalar> v(deg + 1);
  v[deg] = c;
  return XPolynomial(std::move(v));
}

void XPolynomial::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

ExactScalar XPolynomial::eval(const ExactScalar& x) const {
  ExactScalar r(0);
  for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

XPolynomial XPolynomial::derivative() const {
  std::vector<ExactScalar> d;
  for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * ExactScalar(static_cast<long>(i)));
  return XPolynomial(std::move(d));
}

XPolynomial operator+(const XPolynomial& a, const XPolynomial& b) {
  std::vector<ExactScalar> r(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
  return XPolynomial(std::move(r));
}

XPolynomial operator-(const XPolynomial& a, const XPolynomial& b) {
  std::vector<ExactScalar> r(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
  return XPolynomial(std::move(r));
}

XPolynomial operator*(const XPolynomial& a, const XPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<ExactScalar> r(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return XPolynomial(std::move(r));
}

XPolynomial operator*(const ExactScalar& s, const XPolynomial& a) {
  std::vector<ExactScalar> r(a.c_);
  for (auto& x : r) x *= s;
  return XPolynomial(std::move(r));
}

bool operator==(const XPolynomial& a, const XPolynomial& b) {
  if (a.c_.size() != b.c_.size()) return false;
  for (size_t i = 0; i < a.c_.size(); ++i)
    if (a.c_[i] != b.c_[i]) return false;
  return true;
}

std::string XPolynomial::str() const {
  if (c_.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + c_[i].str() + ")";
    if (i > 0) s += "*X^" + std::to_string(i);
  }
  return s;
}

XPolynomial interpolate(const std::vector<std::pair<ExactScalar, ExactScalar>>& pts) {
  const size_t n = pts.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (pts[i].first == pts[j].first) throw std::invalid_argument("degenerate interpolation nodes");
  // Newton divided differences, then expand to the monomial basis.
  std::vector<ExactScalar> dd(n);
  for (size_t i = 0; i < n; ++i) dd[i] = pts[i].second;
  for (size_t k = 1; k < n; ++k)
    for (size_t i = n - 1; i >= k; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (pts[i].first - pts[i - k].first);
      if (i == k) break;
    }
  XPolynomial p;
  for (size_t i = n; i-- > 0;) {
    // p = p * (X - x_i) + dd[i]
    p = p * XPolynomial({-pts[i].first, ExactScalar(1)}) + XPolynomial::constant(dd[i]);
  }
  return p;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  if (a.empty()) return {};
  const size_t n = a.size(), m = b.size(), k = b.empty() ? 0 : b[0].size();
  Matrix r(n, Vector(k));
  for (size_t i = 0; i < n; ++i) {
    if (a[i].size() != m) throw std::invalid_argument("dimension mismatch");
    for (size_t l = 0; l < m; ++l) {
      if (a[i][l].is_zero()) continue;
      for (size_t j = 0; j < k; ++j) r[i][j] += a[i][l] * b[l][j];
    }
  }
  return r;
}

Vector mat_vec(const Matrix& a, const Vector& v) {
  Vector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != v.size()) throw std::invalid_argument("dimension mismatch");
    for (size_t j = 0; j < v.size(); ++j)
      if (!a[i][j].is_zero()) r[i] += a[i][j] * v[j];
  }
  return r;
}

Vector solve_linear(const Matrix& M, const Vector& v) {
  const size_t n = M.size();
  if (v.size() != n) throw std::invalid_argument("dimension mismatch");
  Matrix a(M);
  Vector b(v);
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("matrix not square");
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a[piv][c].is_zero()) ++piv;
    if (piv == n) throw std::domain_error("singular system");
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (size_t r = c + 1; r < n; ++r) {
      if (a[r][c].is_zero()) continue;
      ExactScalar f = a[r][c] / a[c][c];
      for (size_t j = c; j < n; ++j)
        if (!a[c][j].is_zero()) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  Vector x(n);
  for (size_t i = n; i-- > 0;) {
    ExactScalar s = b[i];
    for (size_t j = i + 1; j < n; ++j)
      if (!a[i][j].is_zero()) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

ExactScalar determinant(Matrix a) {
  const size_t n = a.size();
  ExactScalar det(1);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a[piv][c].is_zero()) ++piv;
    if (piv == n) return ExactScalar(0) * det;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      if (a[r][c].is_zero()) continue;
      ExactScalar f = a[r][c] / a[c][c];
      for (size_t j = c; j < n; ++j)
        if (!a[c][j].is_zero()) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

ExactScalar derivative_at_one(const XPolynomial& p) { return -p.derivative().eval(ExactScalar(1)); }

}  // namespace hermlab
