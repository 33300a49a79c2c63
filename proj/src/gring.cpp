#include "hermlab/gring.hpp"

#include <stdexcept>

namespace hermlab {

int int_valuation(long long v, long p) {
  if (v == 0) return 1 << 20;
  int k = 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long i = 2; i * i <= n; ++i)
    if (n % i == 0) return false;
  return true;
}

// Polynomials over F_p, ascending, not necessarily trimmed.
using FPoly = std::vector<long>;

void ftrim(FPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

long inv_mod(long a, long p) {
  long r = 1, e = p - 2, b = ((a % p) + p) % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

// remainder of a mod b over F_p
FPoly fmod_poly(FPoly a, FPoly b, long p) {
  ftrim(a);
  ftrim(b);
  long li = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    long c = a.back() * li % p;
    size_t s = a.size() - b.size();
    for (size_t j = 0; j < b.size(); ++j) a[s + j] = ((a[s + j] - c * b[j]) % p + p) % p;
    ftrim(a);
  }
  return a;
}

// Does some monic polynomial of degree 1..deg/2 divide g?
bool irreducible_mod_p(const FPoly& g, long p) {
  const int n = static_cast<int>(g.size()) - 1;
  for (int k = 1; 2 * k <= n; ++k) {
    long total = 1;
    for (int i = 0; i < k; ++i) total *= p;
    for (long code = 0; code < total; ++code) {
      FPoly h(k + 1);
      long c = code;
      for (int i = 0; i < k; ++i) {
        h[i] = c % p;
        c /= p;
      }
      h[k] = 1;
      if (fmod_poly(g, h, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

bool RingElem::is_zero() const {
  for (auto x : c)
    if (x) return false;
  return true;
}
RingElem RingElem::operator+(const RingElem& o) const { return ctx->add(*this, o); }
RingElem RingElem::operator-(const RingElem& o) const { return ctx->sub(*this, o); }
RingElem RingElem::operator-() const { return ctx->neg(*this); }
RingElem RingElem::operator*(const RingElem& o) const { return ctx->mul(*this, o); }

RingCtx::RingCtx(long p, int f, int d) : p_(p), f_(f), d_(d) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
  if (f < 1 || f > kMaxRingDeg / 2) throw std::invalid_argument("inertia degree out of range");
  if (d < 1) throw std::invalid_argument("precision must be >= 1");
  q_ = 1;
  for (int i = 0; i < f; ++i) q_ *= p;
  __int128 m = 1;
  for (int i = 0; i < d; ++i) {
    m *= p;
    if (m > (static_cast<__int128>(1) << 62)) throw std::invalid_argument("p^d too large");
  }
  mod_ = static_cast<int64_t>(m);
  find_defining_poly();
  build_sigma();
}

size_t RingCtx::size() const {
  __int128 s = 1;
  for (int i = 0; i < 2 * d_ * f_; ++i) {
    s *= p_;
    if (s > (static_cast<__int128>(1) << 62)) throw std::overflow_error("ring too large to enumerate");
  }
  return static_cast<size_t>(s);
}

void RingCtx::find_defining_poly() {
  const int n = 2 * f_;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= p_;
  // Lexicographic in (c_{n-1}, ..., c_0): c_{n-1} is the most significant digit.
  for (long code = 0; code < total; ++code) {
    FPoly g(n + 1);
    long c = code;
    for (int i = 0; i < n; ++i) {
      g[i] = c % p_;
      c /= p_;
    }
    g[n] = 1;
    if (irreducible_mod_p(g, p_)) {
      g_.assign(g.begin(), g.begin() + n);
      return;
    }
  }
  throw std::logic_error("no irreducible polynomial found");
}

int64_t RingCtx::red(__int128 v) const {
  int64_t r = static_cast<int64_t>(v % mod_);
  return r < 0 ? r + mod_ : r;
}

RingElem RingCtx::zero() const {
  RingElem z;
  z.ctx = this;
  return z;
}

RingElem RingCtx::from_int(long long v) const {
  RingElem z = zero();
  z.c[0] = red(v);
  return z;
}

RingElem RingCtx::omega() const {
  RingElem z = zero();
  if (deg() == 1) throw std::logic_error("degenerate ring");
  z.c[1] = 1;
  return z;
}

RingElem RingCtx::from_coeffs(const std::vector<long long>& c) const {
  if (static_cast<int>(c.size()) > deg()) throw std::invalid_argument("too many coefficients");
  RingElem z = zero();
  for (size_t i = 0; i < c.size(); ++i) z.c[i] = red(c[i]);
  return z;
}

RingElem RingCtx::add(const RingElem& a, const RingElem& b) const {
  RingElem r = zero();
  for (int i = 0; i < deg(); ++i) {
    int64_t s = a.c[i] + b.c[i];
    r.c[i] = s >= mod_ ? s - mod_ : s;
  }
  return r;
}

RingElem RingCtx::sub(const RingElem& a, const RingElem& b) const {
  RingElem r = zero();
  for (int i = 0; i < deg(); ++i) {
    int64_t s = a.c[i] - b.c[i];
    r.c[i] = s < 0 ? s + mod_ : s;
  }
  return r;
}

RingElem RingCtx::neg(const RingElem& a) const {
  RingElem r = zero();
  for (int i = 0; i < deg(); ++i) r.c[i] = a.c[i] ? mod_ - a.c[i] : 0;
  return r;
}

RingElem RingCtx::scale(const RingElem& a, long long s) const {
  RingElem r = zero();
  int64_t sm = red(s);
  for (int i = 0; i < deg(); ++i) r.c[i] = red(static_cast<__int128>(a.c[i]) * sm);
  return r;
}

RingElem RingCtx::mul(const RingElem& a, const RingElem& b) const {
  const int n = deg();
  __int128 t[2 * kMaxRingDeg] = {};
  for (int i = 0; i < n; ++i) {
    if (!a.c[i]) continue;
    for (int j = 0; j < n; ++j) t[i + j] = (t[i + j] + static_cast<__int128>(a.c[i]) * b.c[j]) % mod_;
  }
  // w^n = -sum g_i w^i
  for (int k = 2 * n - 2; k >= n; --k) {
    __int128 top = t[k] % mod_;
    if (!top) continue;
    t[k] = 0;
    for (int i = 0; i < n; ++i) t[k - n + i] = (t[k - n + i] - top * g_[i]) % mod_;
  }
  RingElem r = zero();
  for (int i = 0; i < n; ++i) r.c[i] = red(t[i]);
  return r;
}

RingElem RingCtx::conj(const RingElem& a) const {
  const int n = deg();
  __int128 t[kMaxRingDeg] = {};
  for (int j = 0; j < n; ++j) {
    if (!a.c[j]) continue;
    for (int i = 0; i < n; ++i) t[i] = (t[i] + static_cast<__int128>(a.c[j]) * sigma_[j][i]) % mod_;
  }
  RingElem r = zero();
  for (int i = 0; i < n; ++i) r.c[i] = red(t[i]);
  return r;
}

int RingCtx::valuation(const RingElem& a) const {
  int v = d_;
  for (int i = 0; i < deg(); ++i)
    if (a.c[i]) v = std::min(v, int_valuation(a.c[i], p_));
  return v;
}

RingElem RingCtx::inverse(const RingElem& a) const {
  if (!is_unit(a)) throw std::domain_error("inverse of a non-unit");
  // a^{q^2-2} inverts a modulo p; Newton lifts to p^d.
  RingElem y = one(), b = a;
  unsigned long long e = static_cast<unsigned long long>(q_) * static_cast<unsigned long long>(q_) - 2;
  while (e) {
    if (e & 1) y = mul(y, b);
    b = mul(b, b);
    e >>= 1;
  }
  RingElem two = from_int(2);
  for (int prec = 1; prec < d_; prec *= 2) y = mul(y, sub(two, mul(a, y)));
  if (mul(a, y) != one()) throw std::logic_error("inverse failed");
  return y;
}

RingElem RingCtx::div_p(const RingElem& a, int k) const {
  int64_t pk = 1;
  for (int i = 0; i < k; ++i) pk *= p_;
  RingElem r = zero();
  for (int i = 0; i < deg(); ++i) {
    if (a.c[i] % pk) throw std::domain_error("div_p: not divisible");
    r.c[i] = a.c[i] / pk;
  }
  return r;
}

RingElem RingCtx::mul_p(const RingElem& a, int k) const {
  int64_t pk = 1;
  for (int i = 0; i < k && i < d_; ++i) pk *= p_;
  if (k >= d_) return zero();
  return scale(a, pk);
}

uint64_t RingCtx::index(const RingElem& a) const {
  uint64_t idx = 0;
  for (int i = deg(); i-- > 0;) idx = idx * static_cast<uint64_t>(mod_) + static_cast<uint64_t>(a.c[i]);
  return idx;
}

RingElem RingCtx::from_index(uint64_t idx) const {
  RingElem r = zero();
  for (int i = 0; i < deg(); ++i) {
    r.c[i] = static_cast<int64_t>(idx % static_cast<uint64_t>(mod_));
    idx /= static_cast<uint64_t>(mod_);
  }
  return r;
}

std::vector<RingElem> RingCtx::all_elements() const {
  size_t n = size();
  std::vector<RingElem> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(from_index(i));
  return out;
}

void RingCtx::build_sigma() {
  const int n = deg();
  sigma_.assign(n, {});
  for (int j = 0; j < n; ++j) sigma_[j].fill(0);
  // theta = w^q, then Newton on g to the root of g congruent to w^q.
  RingElem w = omega();
  RingElem theta = one();
  for (long i = 0; i < q_; ++i) theta = mul(theta, w);
  auto g_at = [&](const RingElem& x) {
    RingElem acc = one();  // monic leading term, Horner from the top
    for (int i = n; i-- > 0;) acc = add(mul(acc, x), from_int(g_[i]));
    return acc;
  };
  auto dg_at = [&](const RingElem& x) {
    RingElem acc = from_int(n);
    for (int i = n; i-- > 1;) acc = add(mul(acc, x), from_int(static_cast<long long>(i) * g_[i]));
    return acc;
  };
  // identity matrix placeholder so conj() is usable during the bootstrap
  for (int j = 0; j < n; ++j) sigma_[j][j] = 1;
  for (int it = 0; it <= d_ + 1; ++it) theta = sub(theta, mul(g_at(theta), inverse(dg_at(theta))));
  if (!g_at(theta).is_zero()) throw std::logic_error("Frobenius lift failed");
  RingElem pw = one();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) sigma_[j][i] = pw.c[i];
    pw = mul(pw, theta);
  }
  // The conjugation of E/F is Frobenius^f, i.e. x -> x^q on residues; theta
  // already realizes w -> w^q so sigma is that map.
}

}  // namespace hermlab
