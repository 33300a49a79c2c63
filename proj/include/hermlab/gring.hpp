#pragma once
// R_d = O_E / pi^d for E/F unramified quadratic, F/Q_p unramified of degree f.
// Realized as (Z/p^d)[w]/(g) with g monic of degree 2f, irreducible mod p.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace hermlab {

constexpr int kMaxRingDeg = 6;  // 2f with f <= 3

class RingCtx;

struct RingElem {
  std::array<int64_t, kMaxRingDeg> c{};
  const RingCtx* ctx = nullptr;

  RingElem operator+(const RingElem& o) const;
  RingElem operator-(const RingElem& o) const;
  RingElem operator-() const;
  RingElem operator*(const RingElem& o) const;
  bool operator==(const RingElem& o) const { return c == o.c; }
  bool operator!=(const RingElem& o) const { return c != o.c; }
  bool is_zero() const;
};

class RingCtx {
 public:
  // p odd prime, 1 <= f <= 3, d >= 1, p^d < 2^62.
  RingCtx(long p, int f, int d);

  long p() const { return p_; }
  int f() const { return f_; }
  int d() const { return d_; }
  long q() const { return q_; }
  int deg() const { return 2 * f_; }
  int64_t modulus() const { return mod_; }
  // Monic defining polynomial coefficients c_0..c_{2f-1} in [0,p).
  const std::vector<int64_t>& defining_poly() const { return g_; }
  size_t size() const;  // q^{2d}, only when it fits

  RingElem zero() const;
  RingElem one() const { return from_int(1); }
  RingElem from_int(long long v) const;
  RingElem omega() const;  // class of w
  RingElem from_coeffs(const std::vector<long long>& c) const;

  RingElem add(const RingElem& a, const RingElem& b) const;
  RingElem sub(const RingElem& a, const RingElem& b) const;
  RingElem neg(const RingElem& a) const;
  RingElem mul(const RingElem& a, const RingElem& b) const;
  RingElem scale(const RingElem& a, long long s) const;
  RingElem conj(const RingElem& a) const;
  RingElem norm(const RingElem& a) const { return mul(a, conj(a)); }
  RingElem trace(const RingElem& a) const { return add(a, conj(a)); }
  // Largest k < d with a in p^k R_d, or d for zero ("at least d").
  int valuation(const RingElem& a) const;
  bool is_unit(const RingElem& a) const { return valuation(a) == 0; }
  RingElem inverse(const RingElem& a) const;  // a must be a unit
  bool is_fixed(const RingElem& a) const { return conj(a) == a; }
  // a = p^v * u; returns a / p^k for k <= valuation(a), as an element of this
  // ring (the top k digits are unknown and set to zero).
  RingElem div_p(const RingElem& a, int k) const;
  RingElem mul_p(const RingElem& a, int k) const;

  // Dense index in [0, q^{2d}) and back; for tables and enumeration.
  uint64_t index(const RingElem& a) const;
  RingElem from_index(uint64_t idx) const;
  std::vector<RingElem> all_elements() const;

  const std::vector<std::array<int64_t, kMaxRingDeg>>& sigma_matrix() const { return sigma_; }

 private:
  void find_defining_poly();
  void build_sigma();
  int64_t red(__int128 v) const;

  long p_;
  int f_, d_;
  long q_;
  int64_t mod_;
  std::vector<int64_t> g_;
  // sigma_[j] = coordinates of sigma(w^j)
  std::vector<std::array<int64_t, kMaxRingDeg>> sigma_;
};

// Valuation of an ordinary integer at p (v(0) = large).
int int_valuation(long long v, long p);

}  // namespace hermlab
