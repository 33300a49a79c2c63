#include "hermlab/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace hermlab {

namespace {

using RMat = std::vector<std::vector<RingElem>>;
using Type = std::vector<int>;  // descending, parts in [0, D]
using u128 = unsigned __int128;

[[noreturn]] void desk_scale() { throw std::runtime_error("instance exceeds desk scale"); }

const RingCtx& ring(long p, int f, int d) {
  static std::mutex mu;
  static std::map<std::tuple<long, int, int>, std::unique_ptr<RingCtx>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_tuple(p, f, d);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<RingCtx>(p, f, d)).first;
  return *it->second;
}

int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

mpz_class zpow(long b, long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(e));
  return r;
}

mpz_class from_u128(u128 v) {
  mpz_class hi(static_cast<unsigned long>(static_cast<uint64_t>(v >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<uint64_t>(v)));
  return (hi << 64) + lo;
}

// valuation of x mod p^cap, capped at cap
inline int ival(int64_t x, int64_t p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (v < cap && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

uint64_t type_key(const Type& t, int D) {
  uint64_t k = 0;
  for (int x : t) k = k * static_cast<uint64_t>(D + 1) + static_cast<uint64_t>(x);
  return k;
}

Type key_type(uint64_t key, int k, int D) {
  Type t(static_cast<size_t>(k));
  for (int i = k; i-- > 0;) {
    t[static_cast<size_t>(i)] = static_cast<int>(key % static_cast<uint64_t>(D + 1));
    key /= static_cast<uint64_t>(D + 1);
  }
  return t;
}

// ---------------------------------------------------------------- coordinate classes
// Orbits of R_{D'} under multiplication by norm-one units: (valuation v, norm of
// the unit part mod pi^{D'-v}), plus zero.  Weight = orbit size.

struct FastClass {
  int v;        // D' for the zero class
  int64_t N;    // a norm value in Z realizing the class (0 for zero)
  int64_t w;
};

const std::vector<FastClass>& fast_classes(long p, int Dp) {
  static std::mutex mu;
  static std::map<std::pair<long, int>, std::vector<FastClass>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(p, Dp);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<FastClass> out;
  for (int v = 0; v < Dp; ++v) {
    int j = Dp - v;
    int64_t pj = ipow(p, j), p2v = ipow(p, 2 * v);
    int64_t w = ipow(p, j - 1) * (p + 1);
    // the norm is onto the units of Z_p, so every unit residue is a class
    for (int64_t nu = 1; nu < pj; ++nu)
      if (nu % p) out.push_back({v, p2v * nu, w});
  }
  out.push_back({Dp, 0, 1});
  return cache.emplace(key, std::move(out)).first->second;
}

struct GenClass {
  RingElem x;  // element of R_D (lifted)
  int64_t w;
};

// Generic version for any f: representatives as ring elements of R_D.
std::vector<GenClass> gen_classes(long p, int f, int Dp, int D) {
  const RingCtx& RD = ring(p, f, D);
  std::vector<GenClass> out;
  for (int v = 0; v < Dp; ++v) {
    int j = Dp - v;
    const RingCtx& Rj = ring(p, f, j);
    std::map<uint64_t, std::pair<RingElem, int64_t>> by_norm;
    size_t sz = Rj.size();
    for (size_t i = 0; i < sz; ++i) {
      RingElem w = Rj.from_index(i);
      if (!Rj.is_unit(w)) continue;
      uint64_t nk = Rj.index(Rj.norm(w));
      auto f2 = by_norm.find(nk);
      if (f2 == by_norm.end())
        by_norm.emplace(nk, std::make_pair(w, int64_t(1)));
      else
        f2->second.second++;
    }
    for (auto& [nk, pr] : by_norm) {
      std::vector<long long> coeffs(static_cast<size_t>(RD.deg()));
      for (int i = 0; i < RD.deg(); ++i) coeffs[static_cast<size_t>(i)] = pr.first.c[static_cast<size_t>(i)];
      RingElem x = RD.mul_p(RD.from_coeffs(coeffs), v);
      out.push_back({x, pr.second});
    }
  }
  out.push_back({RD.zero(), 1});
  return out;
}

// ---------------------------------------------------------------- transfers
// M_a(S -> T) = #{x in R_{D-a}^k : type(S - pi^a x^* x) = T} for S the diagonal
// representative of its type.

using Transfer = std::vector<std::pair<uint64_t, mpz_class>>;

struct TransferKey {
  long p;
  int f, k, D, a;
  uint64_t s;
  bool generic;
  bool operator<(const TransferKey& o) const {
    return std::tie(p, f, k, D, a, s, generic) < std::tie(o.p, o.f, o.k, o.D, o.a, o.s, o.generic);
  }
};

std::mutex transfer_mu;
std::map<TransferKey, Transfer> transfer_cache;

Transfer pack(const std::map<uint64_t, u128>& acc) {
  Transfer t;
  for (auto& [k, w] : acc)
    if (w) t.emplace_back(k, from_u128(w));
  return t;
}

Transfer fast_transfer(long p, int k, int D, int a, const Type& S, int jobs) {
  const int Dp = D - a;
  const auto& cls = fast_classes(p, Dp);
  const int64_t PD = ipow(p, D);
  std::vector<int64_t> pw(static_cast<size_t>(2 * D + 1));
  for (int i = 0; i <= 2 * D; ++i) pw[static_cast<size_t>(i)] = ipow(p, i);
  const __int128 pa = pw[static_cast<size_t>(a)];
  auto md = [](__int128 x, int64_t m) {
    __int128 r = x % m;
    return static_cast<int64_t>(r < 0 ? r + m : r);
  };
  const int nT = (D + 1) * (D + 1);
  if (k == 1) {
    std::vector<u128> acc(static_cast<size_t>(D + 1));
    const int64_t t1 = S[0] < D ? pw[static_cast<size_t>(S[0])] : 0;
    for (const auto& c : cls) {
      int e = ival(md(t1 - pa * c.N, PD), p, D);
      acc[static_cast<size_t>(e)] += static_cast<u128>(c.w);
    }
    std::map<uint64_t, u128> m;
    for (int e = 0; e <= D; ++e) m[type_key({e}, D)] += acc[static_cast<size_t>(e)];
    return pack(m);
  }
  // k == 2
  const int64_t t1 = S[0] < D ? pw[static_cast<size_t>(S[0])] : 0;
  const int64_t t2 = S[1] < D ? pw[static_cast<size_t>(S[1])] : 0;
  const size_t nc = cls.size();
  std::vector<int64_t> h2(nc);
  std::vector<int> e2(nc);
  for (size_t j = 0; j < nc; ++j) {
    h2[j] = md(t2 - pa * cls[j].N, PD);
    e2[j] = ival(h2[j], p, D);
  }
  auto work = [&](size_t lo, size_t hi, std::vector<u128>& acc) {
    for (size_t i = lo; i < hi; ++i) {
      const auto& c1 = cls[i];
      const int e1 = ival(md(t1 - pa * c1.N, PD), p, D);
      const bool z1 = c1.v >= Dp;
      const __int128 base = static_cast<__int128>(t1) * t2 - pa * t2 * c1.N;
      const __int128 pat1 = pa * t1;
      for (size_t j = 0; j < nc; ++j) {
        const auto& c2 = cls[j];
        int m = std::min(e1, e2[j]);
        if (!z1 && c2.v < Dp) m = std::min(m, a + c1.v + c2.v);
        int l1, l2;
        if (m >= D) {
          l1 = l2 = D;
        } else {
          const int64_t mod = pw[static_cast<size_t>(D + m)];
          int64_t det = md(base - pat1 * c2.N, mod);
          int vd = ival(det, p, D + m);
          l1 = std::min(D, vd - m);
          l2 = m;
        }
        acc[static_cast<size_t>(l1 * (D + 1) + l2)] += static_cast<u128>(c1.w) * static_cast<u128>(c2.w);
      }
    }
  };
  std::vector<std::vector<u128>> accs(static_cast<size_t>(std::max(1, jobs)), std::vector<u128>(static_cast<size_t>(nT)));
  if (jobs <= 1 || nc < 64) {
    work(0, nc, accs[0]);
  } else {
    std::vector<std::thread> th;
    for (int t = 0; t < jobs; ++t) {
      size_t lo = nc * static_cast<size_t>(t) / static_cast<size_t>(jobs);
      size_t hi = nc * static_cast<size_t>(t + 1) / static_cast<size_t>(jobs);
      th.emplace_back(work, lo, hi, std::ref(accs[static_cast<size_t>(t)]));
    }
    for (auto& x : th) x.join();
  }
  std::map<uint64_t, u128> m;
  for (const auto& acc : accs)
    for (int l1 = 0; l1 <= D; ++l1)
      for (int l2 = 0; l2 <= l1; ++l2) {
        u128 w = acc[static_cast<size_t>(l1 * (D + 1) + l2)];
        if (w) m[type_key({l1, l2}, D)] += w;
      }
  return pack(m);
}

// S - pi^a x^* x, S diagonal
RMat rank_one_update(const RingCtx& R, const Type& S, int a, const std::vector<RingElem>& x) {
  const size_t k = x.size();
  RMat H(k, std::vector<RingElem>(k, R.zero()));
  for (size_t i = 0; i < k; ++i)
    if (S[i] < R.d()) H[i][i] = R.mul_p(R.one(), S[i]);
  for (size_t i = 0; i < k; ++i) {
    RingElem xi = R.mul_p(R.conj(x[i]), a);
    for (size_t j = 0; j < k; ++j) H[i][j] = H[i][j] - xi * x[j];
  }
  return H;
}

Transfer generic_transfer(long p, int f, int k, int D, int a, const Type& S, uint64_t cap) {
  const int Dp = D - a;
  const RingCtx& R = ring(p, f, D);
  auto cls = gen_classes(p, f, Dp, D);
  const size_t nc = cls.size();
  // blocks of equal S entries; enumerate multisets within a block
  std::vector<std::pair<size_t, size_t>> blocks;  // [start, len)
  for (size_t i = 0; i < S.size();) {
    size_t j = i;
    while (j < S.size() && S[j] == S[i]) ++j;
    blocks.emplace_back(i, j - i);
    i = j;
  }
  // total tuples
  long double total = 1;
  for (auto& b : blocks) {
    long double c = 1;
    for (size_t t = 0; t < b.second; ++t) c = c * static_cast<long double>(nc + t) / static_cast<long double>(t + 1);
    total *= c;
  }
  if (total > static_cast<long double>(cap)) desk_scale();
  std::vector<size_t> idx(static_cast<size_t>(k), 0);
  std::map<uint64_t, mpz_class> acc;
  std::vector<mpz_class> fact(static_cast<size_t>(k + 1), 1);
  for (int i = 1; i <= k; ++i) fact[static_cast<size_t>(i)] = fact[static_cast<size_t>(i - 1)] * i;
  std::vector<RingElem> x(static_cast<size_t>(k), R.zero());
  while (true) {
    // weight: product of class weights times the number of distinct orderings per block
    mpz_class w = 1;
    for (auto& b : blocks) {
      mpz_class perm = fact[b.second];
      size_t run = 1;
      for (size_t t = 1; t <= b.second; ++t) {
        if (t < b.second && idx[b.first + t] == idx[b.first + t - 1]) {
          ++run;
        } else {
          perm /= fact[run];
          run = 1;
        }
      }
      w *= perm;
    }
    for (int i = 0; i < k; ++i) {
      w *= static_cast<long>(cls[idx[static_cast<size_t>(i)]].w);
      x[static_cast<size_t>(i)] = cls[idx[static_cast<size_t>(i)]].x;
    }
    Type T = type_mod(R, rank_one_update(R, S, a, x), D);
    acc[type_key(T, D)] += w;
    // next nondecreasing tuple within blocks
    int pos = k - 1;
    while (pos >= 0) {
      size_t b = 0;
      while (!(blocks[b].first <= static_cast<size_t>(pos) && static_cast<size_t>(pos) < blocks[b].first + blocks[b].second)) ++b;
      if (idx[static_cast<size_t>(pos)] + 1 < nc) {
        ++idx[static_cast<size_t>(pos)];
        for (size_t t = static_cast<size_t>(pos) + 1; t < blocks[b].first + blocks[b].second; ++t) idx[t] = idx[static_cast<size_t>(pos)];
        for (size_t bb = b + 1; bb < blocks.size(); ++bb)
          for (size_t t = blocks[bb].first; t < blocks[bb].first + blocks[bb].second; ++t) idx[t] = 0;
        break;
      }
      --pos;
    }
    if (pos < 0) break;
  }
  Transfer t(acc.begin(), acc.end());
  return t;
}

const Transfer& transfer(long p, int f, int k, int D, int a, const Type& S, const DensityOptions& opt) {
  TransferKey key{p, f, k, D, a, type_key(S, D), opt.force_generic};
  {
    std::lock_guard<std::mutex> lk(transfer_mu);
    auto it = transfer_cache.find(key);
    if (it != transfer_cache.end()) return it->second;
  }
  Transfer t;
  if (D - a <= 0) {
    t.emplace_back(type_key(S, D), mpz_class(1));
  } else if (!opt.force_generic && f == 1 && k <= 2 && 2.0 * D * std::log2(static_cast<double>(p)) < 60) {
    t = fast_transfer(p, k, D, a, S, opt.jobs);
  } else {
    t = generic_transfer(p, f, k, D, a, S, opt.state_cap);
  }
  std::lock_guard<std::mutex> lk(transfer_mu);
  return transfer_cache.emplace(key, std::move(t)).first->second;
}

// Number of (x_1..x_m) in R_D^k with sum pi^{a_i} x_i^* x_i of the given type.
class RowEngine {
 public:
  RowEngine(long p, int f, int k, int D, std::vector<int> rows, const DensityOptions& opt)
      : p_(p), f_(f), k_(k), D_(D), rows_(std::move(rows)), opt_(opt) {
    long q = ipow(p, f);
    for (int a : rows_) mult_.push_back(zpow(q, 2L * k * std::min(a, D)));
  }

  mpz_class count(int j, const Type& S) {
    int zeros = static_cast<int>(std::count(S.begin(), S.end(), D_));
    if (zeros < k_ - j) return 0;
    if (j == 0) return zeros == k_ ? 1 : 0;
    uint64_t key = type_key(S, D_) * 64 + static_cast<uint64_t>(j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const int a = rows_[static_cast<size_t>(j - 1)];
    const Transfer& tr = transfer(p_, f_, k_, D_, a, S, opt_);
    mpz_class s = 0;
    for (const auto& [tk, w] : tr) {
      mpz_class sub = count(j - 1, key_type(tk, k_, D_));
      if (sub != 0) s += w * sub;
    }
    s *= mult_[static_cast<size_t>(j - 1)];
    memo_.emplace(key, s);
    return s;
  }

 private:
  long p_;
  int f_, k_, D_;
  std::vector<int> rows_;
  std::vector<mpz_class> mult_;
  const DensityOptions& opt_;
  std::unordered_map<uint64_t, mpz_class> memo_;
};

// ---------------------------------------------------------------- problem setup

struct Prepared {
  long p;
  int f, m, k, c, D;
  std::vector<int> exps;      // Jordan exponents of A
  std::vector<int> a;         // exps + c
  RMat Bp;                    // pi^c B mod pi^D
  Type btype;
};

Prepared prepare(const HermMatrix& A, const HermMatrix& B, int d) {
  if (d < 1) throw std::invalid_argument("precision must be >= 1");
  if (A.p() != B.p() || A.f() != B.f()) throw std::invalid_argument("A and B over different rings");
  Prepared P;
  P.p = A.p();
  P.f = A.f();
  P.m = A.n();
  P.k = B.n();
  HermMatrix An(A), Bn(B);
  An.normalize();
  Bn.normalize();
  P.c = std::max(An.denom_pow(), Bn.denom_pow());
  P.D = d + P.c;
  P.exps = classify_type(An).parts();
  for (int e : P.exps) P.a.push_back(e + P.c);
  const RingCtx& R = ring(P.p, P.f, P.D);
  P.Bp = Bn.to_ring(R, P.c - Bn.denom_pow());
  P.btype = type_mod(R, P.Bp, P.D);
  return P;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string cache_key(const Prepared& P, int d, const DomainSpec& dom, const HermMatrix& B) {
  std::ostringstream os;
  os << "p=" << P.p << ";f=" << P.f << ";d=" << d << ";dom=" << dom.tag() << ";A=" << Partition(P.exps).str()
     << ";B=" << std::hex << fnv1a(B.to_json().dump());
  return os.str();
}

// Every solution mod pi of the exponent-0 rows has its restricted entries in pi?
bool constraint_implied(const Prepared& P, const DomainSpec& dom, uint64_t cap) {
  std::vector<int> zero_rows, restricted;
  for (int i = 0; i < P.m; ++i) {
    if (P.exps[static_cast<size_t>(i)] < 0) restricted.push_back(i);
    if (P.a[static_cast<size_t>(i)] == 0) zero_rows.push_back(i);
  }
  for (int i : restricted)
    if (P.a[static_cast<size_t>(i)] != 0 || P.exps[static_cast<size_t>(i)] != -1) return false;
  const RingCtx& R1 = ring(P.p, P.f, 1);
  const size_t k = static_cast<size_t>(P.k);
  const uint64_t nvec = static_cast<uint64_t>(std::pow(static_cast<double>(R1.size()), static_cast<double>(k)));
  long double total = std::pow(static_cast<long double>(nvec), static_cast<long double>(zero_rows.size()));
  if (total > static_cast<long double>(cap)) return false;
  // per-vector Gram contributions over F_{q^2}
  std::vector<std::vector<RingElem>> vecs;
  std::vector<RMat> grams;
  std::vector<bool> dual_zero;
  for (uint64_t code = 0; code < nvec; ++code) {
    std::vector<RingElem> x;
    uint64_t c = code;
    for (size_t j = 0; j < k; ++j) {
      x.push_back(R1.from_index(c % R1.size()));
      c /= R1.size();
    }
    RMat g(k, std::vector<RingElem>(k, R1.zero()));
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) g[i][j] = R1.conj(x[i]) * x[j];
    bool dz = true;
    for (int j = 0; j < dom.dual_cols; ++j) dz = dz && x[static_cast<size_t>(j)].is_zero();
    grams.push_back(std::move(g));
    dual_zero.push_back(dz);
  }
  RMat target(k, std::vector<RingElem>(k, R1.zero()));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j)
      for (int t = 0; t < R1.deg(); ++t) target[i][j].c[static_cast<size_t>(t)] = P.Bp[i][j].c[static_cast<size_t>(t)] % P.p;
  const size_t nz = zero_rows.size();
  std::vector<bool> is_restricted(nz);
  for (size_t r = 0; r < nz; ++r) is_restricted[r] = P.exps[static_cast<size_t>(zero_rows[r])] < 0;
  std::vector<uint64_t> idx(nz, 0);
  if (nz == 0) return restricted.empty();
  while (true) {
    RMat s(k, std::vector<RingElem>(k, R1.zero()));
    for (size_t r = 0; r < nz; ++r)
      for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) s[i][j] = s[i][j] + grams[idx[r]][i][j];
    if (s == target) {
      for (size_t r = 0; r < nz; ++r)
        if (is_restricted[r] && !dual_zero[idx[r]]) return false;
    }
    size_t pos = 0;
    while (pos < nz && ++idx[pos] == nvec) idx[pos++] = 0;
    if (pos == nz) break;
  }
  return true;
}

// Restricted rows enumerated explicitly, the rest through the row engine.
mpz_class count_with_restricted_rows(const Prepared& P, const DomainSpec& dom, const DensityOptions& opt) {
  const RingCtx& R = ring(P.p, P.f, P.D);
  const long q = ipow(P.p, P.f);
  std::vector<int> free_rows, rrows;
  for (int i = 0; i < P.m; ++i) (P.exps[static_cast<size_t>(i)] < 0 ? rrows : free_rows).push_back(i);
  std::vector<int> free_a;
  for (int i : free_rows) free_a.push_back(P.a[static_cast<size_t>(i)]);
  std::sort(free_a.begin(), free_a.end(), std::greater<int>());
  RowEngine eng(P.p, P.f, P.k, P.D, free_a, opt);
  // choices per restricted row: coordinates mod pi^{D-a}, dual coordinates in pi^{-e}
  struct RowChoice {
    std::vector<std::vector<RingElem>> coord;  // candidates per column
    mpz_class mult;
    int a;
  };
  std::vector<RowChoice> rc;
  long double total = 1;
  for (int i : rrows) {
    RowChoice ch;
    ch.a = P.a[static_cast<size_t>(i)];
    int r = -P.exps[static_cast<size_t>(i)];
    int Dp = std::max(0, P.D - ch.a);
    const RingCtx* Rs = Dp > 0 ? &ring(P.p, P.f, Dp) : nullptr;
    mpz_class enumerated = 1, full = 1;
    for (int j = 0; j < P.k; ++j) {
      bool dual = j < dom.dual_cols;
      std::vector<RingElem> cand;
      if (Dp == 0) {
        cand.push_back(R.zero());
      } else {
        for (size_t t = 0; t < Rs->size(); ++t) {
          RingElem e = Rs->from_index(t);
          if (dual && Rs->valuation(e) < std::min(r, Dp)) continue;
          std::vector<long long> cf(static_cast<size_t>(R.deg()));
          for (int u = 0; u < R.deg(); ++u) cf[static_cast<size_t>(u)] = e.c[static_cast<size_t>(u)];
          cand.push_back(R.from_coeffs(cf));
        }
      }
      enumerated *= static_cast<unsigned long>(cand.size());
      full *= zpow(q, 2L * (dual ? std::max(0, P.D - r) : P.D));
      total *= static_cast<long double>(cand.size());
      ch.coord.push_back(std::move(cand));
    }
    ch.mult = full / enumerated;
    rc.push_back(std::move(ch));
  }
  if (total > static_cast<long double>(opt.state_cap)) desk_scale();
  const size_t k = static_cast<size_t>(P.k);
  std::vector<size_t> idx(rrows.size() * k, 0);
  mpz_class mult = 1;
  for (auto& ch : rc) mult *= ch.mult;
  mpz_class sum = 0;
  std::map<uint64_t, mpz_class> by_type;
  while (true) {
    RMat H = P.Bp;
    for (size_t r = 0; r < rc.size(); ++r) {
      for (size_t i = 0; i < k; ++i) {
        RingElem xi = R.mul_p(R.conj(rc[r].coord[i][idx[r * k + i]]), rc[r].a);
        for (size_t j = 0; j < k; ++j) H[i][j] = H[i][j] - xi * rc[r].coord[j][idx[r * k + j]];
      }
    }
    by_type[type_key(type_mod(R, H, P.D), P.D)] += 1;
    size_t pos = 0;
    while (pos < idx.size()) {
      size_t r = pos / k, j = pos % k;
      if (++idx[pos] < rc[r].coord[j].size()) break;
      idx[pos++] = 0;
    }
    if (pos == idx.size()) break;
  }
  for (auto& [tk, c] : by_type) sum += c * eng.count(static_cast<int>(free_a.size()), key_type(tk, P.k, P.D));
  return sum * mult;
}

mpz_class count_prepared(const Prepared& P, const DomainSpec& dom, const DensityOptions& opt) {
  if (dom.dual_cols < 0 || dom.dual_cols > P.k) throw std::invalid_argument("bad domain");
  bool any_restricted = false;
  for (int e : P.exps) any_restricted = any_restricted || e < 0;
  const long q = ipow(P.p, P.f);
  std::vector<int> rows(P.a);
  mpz_class divisor = 1;
  if (dom.dual_cols > 0 && any_restricted) {
    if (dom.dual_cols == P.k) {
      // x = pi^r y on every restricted row
      for (int i = 0; i < P.m; ++i) {
        int r = -P.exps[static_cast<size_t>(i)];
        if (r <= 0) continue;
        if (r > P.D) throw std::invalid_argument("precision below the dual shift");
        rows[static_cast<size_t>(i)] += 2 * r;
        divisor *= zpow(q, 2L * P.k * r);
      }
    } else if (!constraint_implied(P, dom, opt.state_cap)) {
      return count_with_restricted_rows(P, dom, opt);
    }
  }
  std::sort(rows.begin(), rows.end(), std::greater<int>());
  RowEngine eng(P.p, P.f, P.k, P.D, rows, opt);
  mpz_class n = eng.count(P.m, P.btype);
  if (n % divisor != 0) throw std::logic_error("substituted count not divisible");
  return n / divisor;
}

ExactScalar q_power(long q, long e) {
  mpq_class v = 1;
  mpz_class b = zpow(q, std::labs(e));
  if (e >= 0)
    v = b;
  else
    v = mpq_class(1, 1) / mpq_class(b);
  return ExactScalar(v);
}

}  // namespace

// ---------------------------------------------------------------- cache

CountCache::CountCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      mem_[j.at("key").get<std::string>()] = mpz_class(j.at("count").get<std::string>());
    } catch (const std::exception&) {
      // ignore a torn trailing record
    }
  }
}

bool CountCache::lookup(const std::string& key, mpz_class* out) {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = mem_.find(key);
  if (it == mem_.end()) {
    ++misses_;
    return false;
  }
  ++hits_;
  *out = it->second;
  return true;
}

void CountCache::store(const std::string& key, const mpz_class& v) {
  std::lock_guard<std::mutex> lk(mu_);
  if (mem_.count(key)) return;
  mem_[key] = v;
  std::ofstream out(path_, std::ios::app);
  nlohmann::json j = {{"key", key}, {"count", v.get_str()}};
  out << j.dump() << "\n";
}

// ---------------------------------------------------------------- counting API

mpz_class count_congruence(const HermMatrix& A, const HermMatrix& B, int d, const DomainSpec& dom,
                           const DensityOptions& opt) {
  Prepared P = prepare(A, B, d);
  std::string key;
  if (opt.cache) {
    key = cache_key(P, d, dom, B);
    mpz_class v;
    if (opt.cache->lookup(key, &v)) return v;
  }
  mpz_class n = count_prepared(P, dom, opt);
  if (opt.cache) opt.cache->store(key, n);
  return n;
}

mpz_class count_naive(const HermMatrix& A, const HermMatrix& B, int d, const DomainSpec& dom, uint64_t cap) {
  HermMatrix An(A), Bn(B);
  An.normalize();
  Bn.normalize();
  const int c = std::max(An.denom_pow(), Bn.denom_pow());
  const int D = d + c;
  const RingCtx& R = ring(A.p(), A.f(), D);
  const size_t m = static_cast<size_t>(A.n()), k = static_cast<size_t>(B.n());
  RMat Ap = An.to_ring(R, c - An.denom_pow());
  RMat Bp = Bn.to_ring(R, c - Bn.denom_pow());
  RMat Aint = An.to_ring(R, 0);  // pi^{cA} A
  const int cA = An.denom_pow();
  long double total = std::pow(static_cast<long double>(R.size()), static_cast<long double>(m * k));
  if (total > static_cast<long double>(cap)) desk_scale();
  std::vector<uint64_t> idx(m * k, 0);
  std::vector<RingElem> X(m * k, R.zero());
  mpz_class count = 0;
  while (true) {
    for (size_t i = 0; i < m * k; ++i) X[i] = R.from_index(idx[i]);
    bool ok = true;
    // dual columns: pi^{cA} A x == 0 mod pi^{cA}
    for (int j = 0; j < dom.dual_cols && ok; ++j)
      for (size_t i = 0; i < m && ok; ++i) {
        RingElem s = R.zero();
        for (size_t l = 0; l < m; ++l) s = s + Aint[i][l] * X[l * k + static_cast<size_t>(j)];
        if (R.valuation(s) < cA) ok = false;
      }
    for (size_t i = 0; i < k && ok; ++i)
      for (size_t j = i; j < k && ok; ++j) {
        RingElem s = R.zero();
        for (size_t l = 0; l < m; ++l) {
          RingElem row = R.zero();
          for (size_t t = 0; t < m; ++t) row = row + Ap[l][t] * X[t * k + j];
          s = s + R.conj(X[l * k + i]) * row;
        }
        if (s != Bp[i][j]) ok = false;
      }
    if (ok) ++count;
    size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == R.size()) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  return count;
}

CountResult count_normalized(const HermMatrix& A, const HermMatrix& B, int d, const DomainSpec& dom,
                             const DensityOptions& opt) {
  CountResult r;
  r.raw = count_congruence(A, B, d, dom, opt);
  HermMatrix An(A), Bn(B);
  An.normalize();
  Bn.normalize();
  r.d = d;
  r.c = std::max(An.denom_pow(), Bn.denom_pow());
  const long k = B.n(), m = A.n();
  r.norm_exp = static_cast<long>(d) * k * k - 2 * m * k * (d + r.c);
  long q = ipow(A.p(), A.f());
  r.normalized = ExactScalar(mpq_class(r.raw)) * q_power(q, r.norm_exp);
  return r;
}

int start_precision(const HermMatrix& A, const HermMatrix& B) {
  int mp = classify_type(A).max_part();
  return 1 + std::max({0, B.det_valuation(), mp});
}

CountResult stabilized_count(const HermMatrix& A, const HermMatrix& B, const DomainSpec& dom,
                             const DensityOptions& opt) {
  const int d0 = start_precision(A, B);
  CountResult prev = count_normalized(A, B, d0, dom, opt);
  for (int d = d0 + 1; d <= d0 + 1 + opt.extra_d; ++d) {
    CountResult cur = count_normalized(A, B, d, dom, opt);
    if (cur.normalized == prev.normalized) {
      prev.stabilized = true;
      return prev;
    }
    prev = cur;
  }
  throw std::runtime_error("not stabilized");
}

ExactScalar alpha(const HermMatrix& A, const HermMatrix& B, const DensityOptions& opt) {
  return stabilized_count(A, B, {}, opt).normalized;
}

ExactScalar x_of_r(long q, int r) { return q_power(q, -2L * r); }

namespace {

// Samples r = 0..r_max and confirms at r_max + 1.  With auto_limit > r_max the
// degree is raised one step at a time until an extra sample confirms.
XPolynomial series_from(const std::function<ExactScalar(int)>& value, long q, int r_max, int auto_limit) {
  std::vector<std::pair<ExactScalar, ExactScalar>> pts;
  for (int r = 0; r <= r_max; ++r) pts.emplace_back(x_of_r(q, r), value(r));
  while (true) {
    XPolynomial poly = interpolate(pts);
    const int r = static_cast<int>(pts.size());
    ExactScalar extra = value(r);
    if (poly.eval(x_of_r(q, r)) == extra) return poly;
    if (r > auto_limit) throw std::runtime_error("degree not confirmed");
    pts.emplace_back(x_of_r(q, r), extra);
  }
}

int auto_degree_limit(const HermMatrix& B) { return 2 * B.n() + std::max(0, B.det_valuation()) + 1; }

}  // namespace

XPolynomial alpha_series(const HermMatrix& A, const HermMatrix& B, int r_max, const DensityOptions& opt) {
  const int limit = r_max < 0 ? auto_degree_limit(B) : r_max;
  if (r_max < 0) r_max = B.n();
  long q = ipow(A.p(), A.f());
  return series_from([&](int r) { return alpha(extend_r(A, r), B, opt); }, q, r_max, limit);
}

ExactScalar alpha_prime(const HermMatrix& A, const HermMatrix& B, int r_max, const DensityOptions& opt) {
  return derivative_at_one(alpha_series(A, B, r_max, opt));
}

ExactScalar weighted_W(int h, int t, const HermMatrix& B, int r, const DensityOptions& opt) {
  if (B.n() % 2) throw std::invalid_argument("B must have even size 2n");
  const int n = B.n() / 2;
  if (h < 0 || h > n || t < 0 || t > n) throw std::invalid_argument("need 0 <= h,t <= n");
  HermMatrix A = extend_r(a_t_matrix(t, n, B.p(), B.f()), r);
  DomainSpec dom;
  dom.dual_cols = 2 * n - h;
  return stabilized_count(A, B, dom, opt).normalized;
}

XPolynomial weighted_W_series(int h, int t, const HermMatrix& B, int r_max, const DensityOptions& opt) {
  const int limit = r_max < 0 ? auto_degree_limit(B) : r_max;
  if (r_max < 0) r_max = B.n();
  long q = ipow(B.p(), B.f());
  return series_from([&](int r) { return weighted_W(h, t, B, r, opt); }, q, r_max, limit);
}

ExactScalar weighted_W_prime(int h, int t, const HermMatrix& B, int r_max, const DensityOptions& opt) {
  return derivative_at_one(weighted_W_series(h, t, B, r_max, opt));
}

}  // namespace hermlab
