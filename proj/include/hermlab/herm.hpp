#pragma once
// Partitions (lattice types), Y-classes, hermitian Gram matrices with bounded
// denominators, Jordan-type classification and the block surgeries.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "hermlab/gring.hpp"
#include "json.hpp"

namespace hermlab {

// Weakly decreasing integer vector.  Parts may be negative.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);  // sorts
  const std::vector<int>& parts() const { return p_; }
  int size() const { return static_cast<int>(p_.size()); }
  int operator[](int i) const { return p_[static_cast<size_t>(i)]; }
  int E(int k) const;  // #{parts == k}
  int t() const;       // nonzero parts
  int val() const;     // sum of parts
  bool nonneg() const { return p_.empty() || p_.back() >= 0; }
  bool is_zero() const;
  int max_part() const { return p_.empty() ? 0 : p_.front(); }
  // s zeros -> ones ; p ones -> zeros ; drop l zeros.
  Partition plus(int s) const;
  Partition minus(int p) const;
  Partition vee(int l) const;
  Partition append(const std::vector<int>& more) const;
  std::string str() const;
  friend bool operator==(const Partition& a, const Partition& b) { return a.p_ == b.p_; }
  friend bool operator!=(const Partition& a, const Partition& b) { return a.p_ != b.p_; }
  // lexicographic, largest part first
  friend bool operator<(const Partition& a, const Partition& b) { return a.p_ < b.p_; }

 private:
  std::vector<int> p_;
};

// All partitions with n parts in [0, k], ascending lexicographic order.
std::vector<Partition> partitions_bounded(int n, int k);
// As above but parts in [lo, hi].
std::vector<Partition> partitions_range(int n, int lo, int hi);

// Exponent multiset of a diagonal-up-to-permutation Y.
class YClass {
 public:
  explicit YClass(std::vector<int> e);  // sorts descending
  const std::vector<int>& e() const { return e_; }
  int size() const { return static_cast<int>(e_.size()); }
  int E0() const;     // #{e_i >= 0}
  int E(int k) const; // k >= 1: #{e_i == -k}; k == 0 gives E0
  // canonical representative of the class of eta: E_0(eta) zeros, E_k(eta) copies of -k
  static YClass canonical(const Partition& eta);
  std::string str() const;

 private:
  std::vector<int> e_;
};

// Element of O_E truncated to Z[w]: coefficients on 1, w, ..., w^{2f-1}.
using EElem = std::vector<mpz_class>;

// Hermitian matrix with entries in pi^{-denom_pow} Z[w].
class HermMatrix {
 public:
  HermMatrix() = default;
  HermMatrix(long p, int f, int n);  // zero matrix
  static HermMatrix diag(long p, int f, const std::vector<int>& exps);
  static HermMatrix identity(long p, int f, int n) { return diag(p, f, std::vector<int>(n, 0)); }

  long p() const { return p_; }
  int f() const { return f_; }
  int n() const { return n_; }
  int denom_pow() const { return c_; }
  const EElem& num(int i, int j) const { return e_[idx(i, j)]; }
  // sets entry (i,j) = x * pi^{-denom_pow} (caller keeps hermitian symmetry)
  void set_num(int i, int j, EElem x);
  // entry (i,j) = pi^{e} * (integer u); convenience for diagonal data
  void set_scaled(int i, int j, long long u, int e);
  void rescale_denominator(int new_c);  // new_c >= denom_pow
  void normalize();  // smallest denominator

  // pi^{c+shift} * G reduced into ctx
  std::vector<std::vector<RingElem>> to_ring(const RingCtx& R, int shift = 0) const;
  // From ring data M over R, meaning M * pi^{-c}; lifts in [0, p^d).
  static HermMatrix from_ring(const RingCtx& R, const std::vector<std::vector<RingElem>>& M, int c);

  bool is_hermitian(int precision) const;
  bool is_integral() const;  // all entries in O_E
  // pi-adic valuation of det(G), from an exact determinant in Q(w).
  int det_valuation() const;
  // smallest entry valuation (may be negative)
  int min_entry_valuation() const;

  HermMatrix block(int r0, int c0, int rows, int cols) const;  // not nec. square
  friend bool operator==(const HermMatrix& a, const HermMatrix& b);
  std::string str() const;
  nlohmann::json to_json() const;
  static HermMatrix from_json(const nlohmann::json& j, long p, int f);

 private:
  size_t idx(int i, int j) const { return static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j); }
  long p_ = 3;
  int f_ = 1, n_ = 0, c_ = 0;
  std::vector<EElem> e_;
  friend HermMatrix block_diag(const HermMatrix& a, const HermMatrix& b);
  friend HermMatrix dual_flip(const HermMatrix& B, int h);
  friend struct HermAccess;
};

HermMatrix gram_of_partition(const Partition& lam, long p = 3, int f = 1);
// diag(1_{2n-t}, pi^{-1} 1_t)
HermMatrix a_t_matrix(int t, int n, long p = 3, int f = 1);
HermMatrix extend_r(const HermMatrix& A, int r);
HermMatrix block_diag(const HermMatrix& a, const HermMatrix& b);
// [[pi D, C],[B, pi^{-1} A]] for blocks A ((2n-h)x(2n-h)), B, C, D (h x h)
HermMatrix dual_flip(const HermMatrix& B, int h);
// G[U] = U^* G U with U over R (entries lifted, so the result is exact mod p^d)
HermMatrix transform(const HermMatrix& G, const RingCtx& R, const std::vector<std::vector<RingElem>>& U);

// Jordan type of a nondegenerate hermitian matrix.
Partition classify_type(const HermMatrix& G);
// Jordan type of an integral hermitian matrix given mod pi^D (truncated at D,
// i.e. parts >= D are reported as D).  Used by the counting engine.
std::vector<int> type_mod(const RingCtx& R, std::vector<std::vector<RingElem>> M, int D);

}  // namespace hermlab
