#include "hermlab/herm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace hermlab {

// ---------------------------------------------------------------- partitions

Partition::Partition(std::vector<int> parts) : p_(std::move(parts)) {
  std::sort(p_.begin(), p_.end(), std::greater<int>());
}

int Partition::E(int k) const { return static_cast<int>(std::count(p_.begin(), p_.end(), k)); }

int Partition::t() const { return size() - E(0); }

int Partition::val() const {
  int s = 0;
  for (int x : p_) s += x;
  return s;
}

bool Partition::is_zero() const {
  for (int x : p_)
    if (x) return false;
  return true;
}

Partition Partition::plus(int s) const {
  if (s < 0 || s > E(0)) throw std::invalid_argument("plus: not enough zeros");
  std::vector<int> v(p_);
  int done = 0;
  for (auto& x : v)
    if (x == 0 && done < s) {
      x = 1;
      ++done;
    }
  return Partition(v);
}

Partition Partition::minus(int p) const {
  if (p < 0 || p > E(1)) throw std::invalid_argument("minus: not enough ones");
  std::vector<int> v(p_);
  int done = 0;
  for (auto& x : v)
    if (x == 1 && done < p) {
      x = 0;
      ++done;
    }
  return Partition(v);
}

Partition Partition::vee(int l) const {
  if (l < 0 || l > E(0)) throw std::invalid_argument("vee: not enough zeros");
  std::vector<int> v(p_);
  for (int i = 0; i < l; ++i) {
    auto it = std::find(v.begin(), v.end(), 0);
    v.erase(it);
  }
  return Partition(v);
}

Partition Partition::append(const std::vector<int>& more) const {
  std::vector<int> v(p_);
  v.insert(v.end(), more.begin(), more.end());
  return Partition(v);
}

std::string Partition::str() const {
  std::string s = "(";
  for (size_t i = 0; i < p_.size(); ++i) s += (i ? "," : "") + std::to_string(p_[i]);
  return s + ")";
}

static void gen_parts(int n, int lo, int hi, std::vector<int>& cur, std::vector<Partition>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.emplace_back(cur);
    return;
  }
  int top = cur.empty() ? hi : cur.back();
  for (int v = lo; v <= top; ++v) {
    cur.push_back(v);
    gen_parts(n, lo, hi, cur, out);
    cur.pop_back();
  }
}

std::vector<Partition> partitions_range(int n, int lo, int hi) {
  std::vector<Partition> out;
  std::vector<int> cur;
  gen_parts(n, lo, hi, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Partition> partitions_bounded(int n, int k) { return partitions_range(n, 0, k); }

YClass::YClass(std::vector<int> e) : e_(std::move(e)) { std::sort(e_.begin(), e_.end(), std::greater<int>()); }

int YClass::E0() const {
  int c = 0;
  for (int x : e_) c += x >= 0;
  return c;
}

int YClass::E(int k) const {
  if (k == 0) return E0();
  return static_cast<int>(std::count(e_.begin(), e_.end(), -k));
}

YClass YClass::canonical(const Partition& eta) {
  std::vector<int> e;
  for (int x : eta.parts()) e.push_back(-x);
  return YClass(e);
}

std::string YClass::str() const {
  std::string s = "Y[";
  for (size_t i = 0; i < e_.size(); ++i) s += (i ? "," : "") + std::to_string(e_[i]);
  return s + "]";
}

// ---------------------------------------------------------------- Z[w] helpers

namespace {

const std::vector<int64_t>& defining_poly_for(long p, int f) {
  static std::mutex mu;
  static std::map<std::pair<long, int>, std::vector<int64_t>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(p, f);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, RingCtx(p, f, 1).defining_poly()).first;
  return it->second;
}

EElem ew_zero(int f) { return EElem(static_cast<size_t>(2 * f)); }

EElem ew_mul(const EElem& a, const EElem& b, const std::vector<int64_t>& g) {
  const size_t n = a.size();
  std::vector<mpz_class> t(2 * n);
  for (size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < n; ++j) t[i + j] += a[i] * b[j];
  }
  for (size_t k = 2 * n - 1; k >= n; --k) {
    if (t[k] != 0) {
      mpz_class top = t[k];
      t[k] = 0;
      for (size_t i = 0; i < n; ++i) t[k - n + i] -= top * g[i];
    }
  }
  return EElem(t.begin(), t.begin() + static_cast<long>(n));
}

EElem ew_add(const EElem& a, const EElem& b) {
  EElem r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

EElem ew_sub(const EElem& a, const EElem& b) {
  EElem r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

bool ew_is_zero(const EElem& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

int mpz_val(const mpz_class& x, long p) {
  if (x == 0) return 1 << 20;
  mpz_class pp(p), y(x);
  int k = 0;
  while (mpz_divisible_p(y.get_mpz_t(), pp.get_mpz_t())) {
    y /= pp;
    ++k;
  }
  return k;
}

int ew_val(const EElem& a, long p) {
  int v = 1 << 20;
  for (const auto& x : a) v = std::min(v, mpz_val(x, p));
  return v;
}

// Laplace expansion; fine for the sizes used here (n <= 8).
EElem ew_det(const std::vector<EElem>& m, int n, const std::vector<int64_t>& g, int f) {
  if (n == 1) return m[0];
  EElem det = ew_zero(f);
  for (int col = 0; col < n; ++col) {
    const EElem& a = m[static_cast<size_t>(col)];
    if (ew_is_zero(a)) continue;
    std::vector<EElem> minor;
    for (int r = 1; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (c != col) minor.push_back(m[static_cast<size_t>(r * n + c)]);
    EElem term = ew_mul(a, ew_det(minor, n - 1, g, f), g);
    det = (col % 2 == 0) ? ew_add(det, term) : ew_sub(det, term);
  }
  return det;
}

}  // namespace

// ---------------------------------------------------------------- HermMatrix

HermMatrix::HermMatrix(long p, int f, int n) : p_(p), f_(f), n_(n), c_(0) {
  e_.assign(static_cast<size_t>(n) * static_cast<size_t>(n), ew_zero(f));
}

void HermMatrix::set_num(int i, int j, EElem x) {
  if (static_cast<int>(x.size()) != 2 * f_) x.resize(static_cast<size_t>(2 * f_));
  e_[idx(i, j)] = std::move(x);
}

void HermMatrix::rescale_denominator(int new_c) {
  if (new_c < c_) throw std::invalid_argument("rescale_denominator: cannot shrink");
  mpz_class s;
  mpz_ui_pow_ui(s.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(new_c - c_));
  for (auto& x : e_)
    for (auto& c : x) c *= s;
  c_ = new_c;
}

void HermMatrix::set_scaled(int i, int j, long long u, int e) {
  // u * pi^e  with the current denominator; grow the denominator if needed
  if (e + c_ < 0) rescale_denominator(-e);
  mpz_class v(static_cast<long>(u));
  mpz_class s;
  mpz_ui_pow_ui(s.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(e + c_));
  EElem x = ew_zero(f_);
  x[0] = v * s;
  set_num(i, j, x);
}

void HermMatrix::normalize() {
  mpz_class pp(p_);
  while (c_ > 0) {
    bool all = true;
    for (const auto& x : e_)
      for (const auto& c : x)
        if (!mpz_divisible_p(c.get_mpz_t(), pp.get_mpz_t())) all = false;
    if (!all) break;
    for (auto& x : e_)
      for (auto& c : x) c /= pp;
    --c_;
  }
}

HermMatrix HermMatrix::diag(long p, int f, const std::vector<int>& exps) {
  HermMatrix m(p, f, static_cast<int>(exps.size()));
  int c = 0;
  for (int e : exps) c = std::max(c, -e);
  m.c_ = c;
  for (int i = 0; i < m.n_; ++i) m.set_scaled(i, i, 1, exps[static_cast<size_t>(i)]);
  return m;
}

std::vector<std::vector<RingElem>> HermMatrix::to_ring(const RingCtx& R, int shift) const {
  if (R.p() != p_ || R.f() != f_) throw std::invalid_argument("ring mismatch");
  if (shift < 0) throw std::invalid_argument("negative shift");
  mpz_class mod(static_cast<long>(R.modulus()));
  mpz_class s;
  mpz_ui_pow_ui(s.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(shift));
  std::vector<std::vector<RingElem>> M(static_cast<size_t>(n_), std::vector<RingElem>(static_cast<size_t>(n_), R.zero()));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      RingElem r = R.zero();
      const EElem& x = e_[idx(i, j)];
      for (int k = 0; k < 2 * f_; ++k) {
        mpz_class v = x[static_cast<size_t>(k)] * s;
        mpz_class m;
        mpz_mod(m.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
        r.c[static_cast<size_t>(k)] = static_cast<int64_t>(m.get_si());
      }
      M[static_cast<size_t>(i)][static_cast<size_t>(j)] = r;
    }
  return M;
}

HermMatrix HermMatrix::from_ring(const RingCtx& R, const std::vector<std::vector<RingElem>>& M, int c) {
  const int n = static_cast<int>(M.size());
  HermMatrix h(R.p(), R.f(), n);
  h.c_ = c;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      EElem x = ew_zero(R.f());
      for (int k = 0; k < 2 * R.f(); ++k) x[static_cast<size_t>(k)] = static_cast<long>(M[static_cast<size_t>(i)][static_cast<size_t>(j)].c[static_cast<size_t>(k)]);
      h.set_num(i, j, x);
    }
  h.normalize();
  return h;
}

bool HermMatrix::is_hermitian(int precision) const {
  RingCtx R(p_, f_, precision);
  auto M = to_ring(R);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (R.conj(M[static_cast<size_t>(i)][static_cast<size_t>(j)]) != M[static_cast<size_t>(j)][static_cast<size_t>(i)]) return false;
  return true;
}

bool HermMatrix::is_integral() const { return min_entry_valuation() >= 0; }

int HermMatrix::min_entry_valuation() const {
  int v = 1 << 20;
  for (const auto& x : e_) v = std::min(v, ew_val(x, p_));
  return v == (1 << 20) ? v : v - c_;
}

int HermMatrix::det_valuation() const {
  EElem d = ew_det(e_, n_, defining_poly_for(p_, f_), f_);
  if (ew_is_zero(d)) throw std::domain_error("degenerate matrix");
  return ew_val(d, p_) - n_ * c_;
}

HermMatrix HermMatrix::block(int r0, int c0, int rows, int cols) const {
  // returned as a general (rows x cols stored in an n=max) container only when square
  if (rows != cols) throw std::invalid_argument("block: only square blocks are matrices here");
  HermMatrix b(p_, f_, rows);
  b.c_ = c_;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) b.set_num(i, j, num(r0 + i, c0 + j));
  b.normalize();
  return b;
}

bool operator==(const HermMatrix& a, const HermMatrix& b) {
  if (a.p_ != b.p_ || a.f_ != b.f_ || a.n_ != b.n_) return false;
  HermMatrix x(a), y(b);
  int c = std::max(x.c_, y.c_);
  x.rescale_denominator(c);
  y.rescale_denominator(c);
  return x.e_ == y.e_;
}

std::string HermMatrix::str() const { return to_json().dump(); }

nlohmann::json HermMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < n_; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < n_; ++j) {
      nlohmann::json ent = nlohmann::json::array();
      for (const auto& c : num(i, j)) ent.push_back(c.get_str());
      row.push_back(ent);
    }
    rows.push_back(row);
  }
  return {{"n", n_}, {"denom_pow", c_}, {"entries", rows}};
}

HermMatrix HermMatrix::from_json(const nlohmann::json& j, long p, int f) {
  int n = j.at("n").get<int>();
  HermMatrix h(p, f, n);
  h.c_ = j.value("denom_pow", 0);
  if (h.c_ < 0) throw std::invalid_argument("denom_pow must be >= 0");
  const auto& rows = j.at("entries");
  if (static_cast<int>(rows.size()) != n) throw std::invalid_argument("entries: wrong row count");
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(rows[static_cast<size_t>(r)].size()) != n) throw std::invalid_argument("entries: wrong column count");
    for (int c = 0; c < n; ++c) {
      const auto& ent = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
      EElem x = ew_zero(f);
      if (ent.size() > x.size()) throw std::invalid_argument("entry has too many coefficients");
      for (size_t k = 0; k < ent.size(); ++k) {
        if (ent[k].is_string())
          x[k] = mpz_class(ent[k].get<std::string>());
        else
          x[k] = mpz_class(ent[k].get<long>());
      }
      h.set_num(r, c, x);
    }
  }
  if (!h.is_hermitian(h.c_ + 8)) throw std::invalid_argument("matrix is not hermitian");
  return h;
}

// ---------------------------------------------------------------- surgeries

HermMatrix gram_of_partition(const Partition& lam, long p, int f) { return HermMatrix::diag(p, f, lam.parts()); }

HermMatrix a_t_matrix(int t, int n, long p, int f) {
  if (t < 0 || t > n) throw std::invalid_argument("t out of range");
  std::vector<int> e(static_cast<size_t>(2 * n - t), 0);
  e.insert(e.end(), static_cast<size_t>(t), -1);
  return HermMatrix::diag(p, f, e);
}

HermMatrix block_diag(const HermMatrix& a, const HermMatrix& b) {
  HermMatrix x(a), y(b);
  int c = std::max(x.c_, y.c_);
  x.rescale_denominator(c);
  y.rescale_denominator(c);
  HermMatrix r(a.p_, a.f_, a.n_ + b.n_);
  r.c_ = c;
  for (int i = 0; i < a.n_; ++i)
    for (int j = 0; j < a.n_; ++j) r.set_num(i, j, x.num(i, j));
  for (int i = 0; i < b.n_; ++i)
    for (int j = 0; j < b.n_; ++j) r.set_num(a.n_ + i, a.n_ + j, y.num(i, j));
  r.normalize();
  return r;
}

HermMatrix extend_r(const HermMatrix& A, int r) {
  if (r < 0) throw std::invalid_argument("r must be >= 0");
  if (r == 0) return A;
  return block_diag(A, HermMatrix::identity(A.p(), A.f(), 2 * r));
}

HermMatrix dual_flip(const HermMatrix& B, int h) {
  const int N = B.n_;
  if (N % 2 != 0 || h < 0 || h > N) throw std::invalid_argument("dimension mismatch");
  const int a = N - h;  // size of the A block
  HermMatrix r(B.p_, B.f_, N);
  r.c_ = B.c_ + 1;
  mpz_class p(B.p_), p2 = p * p;
  auto scaled = [&](const EElem& x, const mpz_class& s) {
    EElem y(x);
    for (auto& c : y) c *= s;
    return y;
  };
  // new index i < h  <-> old index a + i (D block); new index h + k <-> old k (A block)
  auto old_of = [&](int i) { return i < h ? a + i : i - h; };
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const EElem& x = B.num(old_of(i), old_of(j));
      bool ti = i < h, tj = j < h;
      if (ti && tj)
        r.set_num(i, j, scaled(x, p2));  // pi D
      else if (!ti && !tj)
        r.set_num(i, j, x);  // pi^{-1} A
      else
        r.set_num(i, j, scaled(x, p));  // C and B blocks
    }
  r.normalize();
  return r;
}

HermMatrix transform(const HermMatrix& G, const RingCtx& R, const std::vector<std::vector<RingElem>>& U) {
  auto M = G.to_ring(R);
  const size_t n = M.size();
  std::vector<std::vector<RingElem>> T(n, std::vector<RingElem>(n, R.zero())), S = T;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) T[i][j] = T[i][j] + M[i][k] * U[k][j];
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) S[i][j] = S[i][j] + R.conj(U[k][i]) * T[k][j];
  return HermMatrix::from_ring(R, S, G.denom_pow());
}

// ---------------------------------------------------------------- Jordan type

namespace {

using RMat = std::vector<std::vector<RingElem>>;

// col_i += u col_j ; row_i += conj(u) row_j
void add_multiple(const RingCtx& R, RMat& M, size_t i, size_t j, const RingElem& u) {
  const size_t n = M.size();
  for (size_t k = 0; k < n; ++k) M[k][i] = M[k][i] + M[k][j] * u;
  RingElem ub = R.conj(u);
  for (size_t k = 0; k < n; ++k) M[i][k] = M[i][k] + ub * M[j][k];
}

// Pivot valuations of the Jordan splitting of M mod pi^d; blocks that are
// zero mod pi^d report d.
std::vector<int> jordan(const RingCtx& R, RMat M) {
  const int d = R.d();
  const size_t n = M.size();
  std::vector<bool> active(n, true);
  std::vector<int> parts;
  std::vector<RingElem> cands;
  {
    RingElem w = R.one();
    for (int k = 0; k < R.deg(); ++k) {
      cands.push_back(w);
      w = w * R.omega();
    }
    cands.push_back(R.one() + R.omega());
  }
  for (size_t step = 0; step < n; ++step) {
    int vmin = d;
    size_t bi = n, bj = n;
    for (size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (size_t j = i; j < n; ++j) {
        if (!active[j]) continue;
        int v = R.valuation(M[i][j]);
        // prefer diagonal pivots at equal valuation
        if (v < vmin || (v == vmin && v < d && i == j && bi != bj)) {
          vmin = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (vmin >= d) {
      for (size_t i = 0; i < n; ++i)
        if (active[i]) parts.push_back(d);
      break;
    }
    size_t piv = bi;
    if (bi != bj) {
      bool ok = false;
      for (const auto& u : cands) {
        RMat T(M);
        add_multiple(R, T, bi, bj, u);
        if (R.valuation(T[bi][bi]) == vmin) {
          M = std::move(T);
          ok = true;
          break;
        }
      }
      if (!ok) throw std::logic_error("no unit realizes the pivot");
    }
    RingElem inv = R.inverse(R.div_p(M[piv][piv], vmin));
    for (size_t k = 0; k < n; ++k) {
      if (k == piv || !active[k] || M[piv][k].is_zero()) continue;
      RingElem u = -(R.div_p(M[piv][k], vmin) * inv);
      add_multiple(R, M, k, piv, u);
    }
    active[piv] = false;
    parts.push_back(vmin);
  }
  std::sort(parts.begin(), parts.end(), std::greater<int>());
  return parts;
}

}  // namespace

std::vector<int> type_mod(const RingCtx& R, std::vector<std::vector<RingElem>> M, int D) {
  if (D != R.d()) throw std::invalid_argument("type_mod: precision mismatch");
  return jordan(R, std::move(M));
}

Partition classify_type(const HermMatrix& G) {
  const int c = G.denom_pow();
  int P = c + 6;
  while (true) {
    // keep p^P inside 62 bits
    double bits = P * std::log2(static_cast<double>(G.p()));
    if (bits > 61) throw std::overflow_error("precision exhaustion in classify_type");
    RingCtx R(G.p(), G.f(), P);
    std::vector<int> v = jordan(R, G.to_ring(R));
    if (v.front() <= P - 2) {
      for (auto& x : v) x -= c;
      return Partition(v);
    }
    P += 4;
  }
}

}  // namespace hermlab
