#pragma once
// Exact congruence counting over O_E/pi^D and the densities built on it:
// alpha(A,B), alpha(A,B;X), alpha'(A,B), W_{h,t}(B,r), W'_{h,t}(B,0).

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <mutex>
#include <string>

#include "hermlab/exact.hpp"
#include "hermlab/herm.hpp"

namespace hermlab {

// Column tags of the representing matrix X (m x k).  The first dual_cols
// columns range over {x : A x integral}, the rest over O_E^m.
struct DomainSpec {
  int dual_cols = 0;
  std::string tag() const { return dual_cols ? "dual" + std::to_string(dual_cols) : "int"; }
};

struct CountResult {
  mpz_class raw;         // N_D, solutions mod pi^D with D = d + c
  int d = 0;             // precision of the congruence
  int c = 0;             // denominator shift
  long norm_exp = 0;     // normalized = raw * q^{norm_exp}
  ExactScalar normalized;
  bool stabilized = false;
};

// One JSON record per line: {"key": ..., "count": "<decimal>"}.
class CountCache {
 public:
  explicit CountCache(std::string path);
  bool lookup(const std::string& key, mpz_class* out);
  void store(const std::string& key, const mpz_class& v);
  const std::string& path() const { return path_; }
  long hits() const { return hits_; }
  long misses() const { return misses_; }

 private:
  std::string path_;
  long hits_ = 0, misses_ = 0;
  std::map<std::string, mpz_class> mem_;
  std::mutex mu_;
};

struct DensityOptions {
  uint64_t state_cap = uint64_t(1) << 28;  // enumeration cap per transfer / naive loop
  int extra_d = 4;                         // precisions tried beyond the start before "not stabilized"
  int jobs = 1;
  bool force_generic = false;              // skip the closed-form k <= 2 transfer (tests)
  CountCache* cache = nullptr;
};

// |{X mod pi^D : pi^c A[X] == pi^c B mod pi^D, X in the domain}|, D = d + c.
mpz_class count_congruence(const HermMatrix& A, const HermMatrix& B, int d, const DomainSpec& dom = {},
                           const DensityOptions& opt = {});
// Same count by full enumeration; for oracle tests only.
mpz_class count_naive(const HermMatrix& A, const HermMatrix& B, int d, const DomainSpec& dom = {},
                      uint64_t cap = 100000000);

CountResult count_normalized(const HermMatrix& A, const HermMatrix& B, int d, const DomainSpec& dom = {},
                             const DensityOptions& opt = {});

// First precision tried by the stabilization rule.
int start_precision(const HermMatrix& A, const HermMatrix& B);
CountResult stabilized_count(const HermMatrix& A, const HermMatrix& B, const DomainSpec& dom = {},
                             const DensityOptions& opt = {});

ExactScalar alpha(const HermMatrix& A, const HermMatrix& B, const DensityOptions& opt = {});
// Interpolated in X = (-q)^{-2r} from r = 0..r_max, confirmed at r_max + 1.
// r_max < 0: start at the size of B and raise the degree until confirmed.
XPolynomial alpha_series(const HermMatrix& A, const HermMatrix& B, int r_max = -1, const DensityOptions& opt = {});
ExactScalar alpha_prime(const HermMatrix& A, const HermMatrix& B, int r_max = -1, const DensityOptions& opt = {});

// B is 2n x 2n; A_t^{[r]} represents B with the last h columns integral and
// the first 2n-h in the dual of L_t.
ExactScalar weighted_W(int h, int t, const HermMatrix& B, int r, const DensityOptions& opt = {});
XPolynomial weighted_W_series(int h, int t, const HermMatrix& B, int r_max = -1, const DensityOptions& opt = {});
ExactScalar weighted_W_prime(int h, int t, const HermMatrix& B, int r_max = -1, const DensityOptions& opt = {});

// X = (-q)^{-2r}
ExactScalar x_of_r(long q, int r);

}  // namespace hermlab
