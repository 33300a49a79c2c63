#include "hermlab/closedform.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace hermlab {

namespace {

ExactScalar nq(const QField& Q, long e) { return Q.negq_pow(e); }

// q = p^f
std::pair<long, int> prime_power(long q) {
  long p = 0;
  for (long d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0) p = q;
  int f = 0;
  long r = q;
  while (r % p == 0) {
    r /= p;
    ++f;
  }
  if (r != 1 || q < 2) throw std::invalid_argument("q must be a prime power");
  return {p, f};
}

std::vector<std::pair<int, int>> blocks_of(const Partition& lam) {
  std::vector<std::pair<int, int>> b;
  for (int x : lam.parts()) {
    if (!b.empty() && b.back().first == x)
      ++b.back().second;
    else
      b.push_back({x, 1});
  }
  return b;
}

ExactScalar block_product(const Partition& lam, const QField& Q) {
  ExactScalar r(1);
  for (auto [a, k] : blocks_of(lam)) r *= prod_one_minus_inv(Q, 1, k);
  return r;
}

std::vector<YClass> y_classes(int size, int lo, int hi) {
  std::vector<YClass> out;
  for (const auto& P : partitions_range(size, lo, hi)) out.emplace_back(P.parts());
  return out;
}

}  // namespace

ExactScalar prod_one_minus_inv(const QField& Q, int lo, int hi) {
  ExactScalar r(1);
  for (int l = lo; l <= hi; ++l) r *= ExactScalar(1) - nq(Q, -l);
  return r;
}

ExactScalar c_product(const QField& Q, int t) {
  ExactScalar r(1);
  for (int i = 1; i <= t - 1; ++i) r *= ExactScalar(1) - nq(Q, i);
  return r;
}

XPolynomial m_poly(const QField& Q, int a) {
  if (a < 0) throw std::invalid_argument("m_poly: a < 0");
  XPolynomial r = XPolynomial::constant(ExactScalar(1));
  for (int i = 0; i < a; ++i) r = r * XPolynomial({ExactScalar(1), -nq(Q, i)});
  return r;
}

ExactScalar m_deriv(const QField& Q, int a) {
  if (a < 0) throw std::invalid_argument("m_deriv: a < 0");
  return derivative_at_one(m_poly(Q, a));
}

// ---------------------------------------------------------------- C constants

namespace {

// Shipped values.  q = 3 entries were computed once from alpha_series(1_k,1_k).
bool builtin_czero(int k, const QField& Q, ExactScalar* out) {
  if (Q.symbolic_mode()) {
    ExactScalar q = Q.q();
    if (k == 1) {
      *out = ExactScalar(-1) / (q + ExactScalar(1));
      return true;
    }
    if (k == 2) {
      *out = -(q - ExactScalar(2)) / (q * q - ExactScalar(1));
      return true;
    }
    return false;
  }
  if (Q.q_int() == 3) {
    static const long num[] = {-1, -1, -9, -83};
    static const long den[] = {4, 8, 56, 560};
    if (k >= 1 && k <= 4) {
      *out = ExactScalar::rational(num[k - 1], den[k - 1]);
      return true;
    }
  }
  if (k <= 2) {
    QField S = QField::symbolic();
    ExactScalar v;
    builtin_czero(k, S, &v);
    *out = v.at(Q.q_int());
    return true;
  }
  return false;
}

std::mutex czero_mu;
std::map<std::pair<long, int>, ExactScalar> czero_memo;

}  // namespace

bool C_zero_cached(int k, const QField& Q) {
  ExactScalar v;
  if (builtin_czero(k, Q, &v)) return true;
  if (Q.symbolic_mode()) return false;
  std::lock_guard<std::mutex> g(czero_mu);
  return czero_memo.count({Q.q_int(), k}) > 0;
}

ExactScalar C_zero(int k, const QField& Q, const CZeroConfig& cfg) {
  if (k < 1) throw std::invalid_argument("C_zero: k < 1");
  ExactScalar v;
  if (builtin_czero(k, Q, &v)) return v;
  if (Q.symbolic_mode()) throw std::runtime_error("requires concrete q");
  const long q = Q.q_int();
  {
    std::lock_guard<std::mutex> g(czero_mu);
    auto it = czero_memo.find({q, k});
    if (it != czero_memo.end()) return it->second;
  }
  if (!cfg.allow_density) throw std::runtime_error("C_(0^" + std::to_string(k) + ") not cached");
  auto [p, f] = prime_power(q);
  HermMatrix I = HermMatrix::identity(p, f, k);
  XPolynomial s = alpha_series(I, I, -1, cfg.density);
  v = derivative_at_one(s) / s.eval(ExactScalar(1));
  std::lock_guard<std::mutex> g(czero_mu);
  czero_memo[{q, k}] = v;
  return v;
}

ExactScalar C_const(const Partition& lam, const QField& Q, const CZeroConfig& cfg) {
  if (!lam.nonneg()) throw std::invalid_argument("C_const: negative part");
  if (lam.is_zero()) return C_zero(lam.size(), Q, cfg);
  ExactScalar c = c_product(Q, lam.t());
  return (lam.val() % 2 != 0) ? c : -c;
}

// ---------------------------------------------------------------- lambda sum

namespace {

// sum over mu_1 >= ... >= mu_s >= 0 of eps^{|mu|} q^{-sum (2i-1) mu_i} / blocks(mu)
ExactScalar G_sum(int s, int eps, const QField& Q) {
  if (s == 0) return ExactScalar(1);
  std::vector<ExactScalar> y(static_cast<size_t>(s) + 1);
  for (int j = 1; j <= s; ++j) {
    ExactScalar v = Q.q_pow(-static_cast<long>(j) * j);
    y[static_cast<size_t>(j)] = (eps < 0 && j % 2 != 0) ? -v : v;
  }
  ExactScalar total;
  const unsigned nz = static_cast<unsigned>(s - 1);
  for (unsigned mask = 0; mask < (1u << nz); ++mask) {
    // bit i-1 set: delta_i = 0, i.e. mu_i = mu_{i+1}
    ExactScalar term = ExactScalar(1) / (ExactScalar(1) - y[static_cast<size_t>(s)]);
    int run = 1;
    for (int i = 1; i <= s; ++i) {
      bool same = i < s && (mask >> (i - 1) & 1u);
      if (same) {
        ++run;
        continue;
      }
      term /= prod_one_minus_inv(Q, 1, run);
      run = 1;
      if (i < s) {
        const ExactScalar& yi = y[static_cast<size_t>(i)];
        term *= yi / (ExactScalar(1) - yi);
      }
    }
    total += term;
  }
  return total;
}

ExactScalar lambda_sum_impl(int N, const YClass& Y, const QField& Q, bool include_zero, const CZeroConfig& cfg) {
  int M = 1;
  for (int e : Y.e()) M = std::max(M, -e);
  const ExactScalar alpha1 = prod_one_minus_inv(Q, 1, N);
  ExactScalar total;
  for (int s = 0; s <= N; ++s) {
    ExactScalar G = s ? G_sum(s, -1, Q) : ExactScalar(1);
    for (const auto& sig : partitions_range(N - s, 0, M - 1)) {
      long qexp = 0;
      int bexp = s * B_stat(M, Y);
      for (int j = 0; j < sig.size(); ++j) {
        qexp += static_cast<long>(2 * (s + j + 1) - 1) * sig[j];
        bexp += B_stat(sig[j], Y);
      }
      ExactScalar w = alpha1 * Q.q_pow(-qexp - static_cast<long>(M) * s * s) / block_product(sig, Q) * nq(Q, bexp);
      if (s == 0) {
        if (sig.is_zero()) {
          if (!include_zero) continue;
          w *= C_zero(N, Q, cfg);
        } else {
          w *= C_const(sig, Q, cfg);
        }
      } else {
        int t = s + sig.t();
        bool odd = (sig.val() + s * M) % 2 != 0;
        ExactScalar c = c_product(Q, t);
        // C = -(-1)^{|lam|} c_t, the mu-parity is carried by G(-1)
        w *= odd ? c : -c;
        w *= G;
      }
      total += w;
    }
  }
  return total;
}

}  // namespace

ExactScalar lambda_sum(int N, const YClass& Y, const QField& Q, const CZeroConfig& cfg) {
  return lambda_sum_impl(N, Y, Q, true, cfg);
}

ExactScalar C_zero_series(int k, const QField& Q) {
  if (k < 1) throw std::invalid_argument("C_zero_series: k < 1");
  // At Y = 1_k the left side sum_j min(0,e_j) f(Y) vanishes.
  YClass Y(std::vector<int>(static_cast<size_t>(k), 0));
  return -lambda_sum_impl(k, Y, Q, false, {});
}

// ---------------------------------------------------------------- self-densities

ExactScalar self_density_diag(const std::vector<std::pair<int, int>>& blocks, const QField& Q) {
  ExactScalar r(1);
  long prev = 0, nj = 0;
  for (size_t j = 0; j < blocks.size(); ++j) {
    auto [a, k] = blocks[j];
    if (k < 1) throw std::invalid_argument("self_density_diag: empty block");
    if (j > 0 && a >= blocks[j - 1].first)
      throw std::invalid_argument("self_density_diag: exponents must be strictly decreasing");
    nj += k;
    r *= Q.q_pow(static_cast<long>(a) * (nj * nj - prev * prev)) * prod_one_minus_inv(Q, 1, k);
    prev = nj;
  }
  return r;
}

ExactScalar self_density(const Partition& lam, const QField& Q) { return self_density_diag(blocks_of(lam), Q); }

ExactScalar W_nn_closed(int n, const QField& Q) {
  ExactScalar p = prod_one_minus_inv(Q, 1, n);
  return Q.q_pow(-3L * n * n) * p * p;
}

// ---------------------------------------------------------------- beta system

BetaSystem beta_consts(int n, int h, const QField& Q) {
  if (n < 1 || h < 0 || h > n) throw std::invalid_argument("beta_consts: need n >= 1, 0 <= h <= n");
  BetaSystem S;
  S.n = n;
  S.h = h;
  const int N = 2 * n + 1;
  const long g = 2L * n - h;
  S.frakB.assign(N, Vector(N));
  for (int i = 1; i <= N; ++i) {
    const long u = i - (g + 1);
    auto& row = S.frakB[static_cast<size_t>(i - 1)];
    for (int t = 0; t < n; ++t) {
      row[static_cast<size_t>(t)] = nq(Q, (n - t) * u - 2L * t * g);
      row[static_cast<size_t>(n + t)] = Q.q_pow(-g * g + static_cast<long>(h) * h) * nq(Q, -(n - t) * u - 2L * t * h);
    }
    row[static_cast<size_t>(2 * n)] = nq(Q, -2L * n * g);  // m_{i,n}
    S.rhs.push_back(nq(Q, -2L * n * g) * ExactScalar(u));
  }
  std::vector<ExactScalar> x(static_cast<size_t>(N) + 1), al(static_cast<size_t>(N) + 1);
  for (int i = 1; i <= n; ++i) {
    x[static_cast<size_t>(i)] = nq(Q, n + 1 - i);
    al[static_cast<size_t>(i)] = nq(Q, (n + 1L - i) * g);
  }
  for (int i = n + 1; i <= 2 * n; ++i) {
    x[static_cast<size_t>(i)] = nq(Q, i - 2L * n - 1);
    al[static_cast<size_t>(i)] = nq(Q, (2L * n + 1 - i) * (2L * n + h));
  }
  x[static_cast<size_t>(N)] = ExactScalar(1);
  al[static_cast<size_t>(N)] = ExactScalar(1);
  S.frakX.assign(N, Vector(N));
  S.a_h.assign(N, Vector(N));
  for (int c = 1; c <= N; ++c) {
    ExactScalar pw(1);
    for (int r = 0; r < N; ++r) {
      S.frakX[static_cast<size_t>(r)][static_cast<size_t>(c - 1)] = pw;
      pw *= x[static_cast<size_t>(c)];
    }
    S.a_h[static_cast<size_t>(c - 1)][static_cast<size_t>(c - 1)] = al[static_cast<size_t>(c)];
  }
  Matrix XA = mat_mul(S.frakX, S.a_h);
  const ExactScalar sc = nq(Q, 2L * n * g);
  S.factorization_ok = true;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c)
      if (sc * S.frakB[static_cast<size_t>(r)][static_cast<size_t>(c)] != XA[static_cast<size_t>(r)][static_cast<size_t>(c)])
        S.factorization_ok = false;

  S.solution = solve_linear(S.frakB, S.rhs);
  for (int i = 1; i <= 2 * n; ++i) {
    ExactScalar num(1), den(1);
    for (int m = 1; m <= 2 * n; ++m)
      if (m != i) num *= ExactScalar(1) - x[static_cast<size_t>(m)];
    for (int m = 1; m <= N; ++m)
      if (m != i) den *= x[static_cast<size_t>(m)] - x[static_cast<size_t>(i)];
    S.closed.push_back(num / den / al[static_cast<size_t>(i)]);
  }
  for (int i = 0; i < 2 * n; ++i)
    if (S.closed[static_cast<size_t>(i)] != S.solution[static_cast<size_t>(i)])
      throw std::runtime_error("beta cross-check failed");
  if (!S.factorization_ok) throw std::runtime_error("beta cross-check failed");
  return S;
}

// ---------------------------------------------------------------- d, K, A

ExactScalar d_closed(int i, int l, int n, const QField& Q) {
  ExactScalar r = nq(Q, -2L * i * n);
  for (int m = 0; m <= l; ++m)
    if (m != i) r /= nq(Q, -i) - nq(Q, -m);
  return r;
}

namespace {

Matrix frakM(int l, int n, const QField& Q) {
  Matrix M(static_cast<size_t>(l) + 1, Vector(static_cast<size_t>(l) + 1));
  for (int k = 0; k <= l; ++k)
    for (int s = 0; s <= l; ++s) M[static_cast<size_t>(k)][static_cast<size_t>(s)] = nq(Q, static_cast<long>(s) * (2 * n - k));
  return M;
}

}  // namespace

Vector d_coeffs(int l, int n, const QField& Q) {
  if (l < 0 || l > 2 * n) throw std::invalid_argument("d_coeffs: need 0 <= l <= 2n");
  Vector e(static_cast<size_t>(l) + 1);
  e.back() = ExactScalar(1);
  Vector solved = solve_linear(frakM(l, n, Q), e);
  Vector closed;
  for (int i = 0; i <= l; ++i) closed.push_back(d_closed(i, l, n, Q));
  if (solved != closed) throw std::runtime_error("d cross-check failed");
  return closed;
}

ExactScalar telescoping_sum(int k, const QField& Q) {
  ExactScalar total, prod(1);
  for (int j = 1; j <= k; ++j) {
    prod *= (nq(Q, -j + 1) - nq(Q, -k)) / (ExactScalar(1) - nq(Q, -j));
    total += (j % 2 != 0) ? prod : -prod;
  }
  return total;
}

KDSystem kd_system(int n, const QField& Q) {
  if (n < 1) throw std::invalid_argument("kd_system: n < 1");
  KDSystem S;
  S.n = n;
  const int L = 2 * n;
  for (int l = 0; l <= L; ++l) {
    S.M.push_back(frakM(l, n, Q));
    Matrix X(static_cast<size_t>(l) + 1, Vector(static_cast<size_t>(l) + 1));
    Matrix dl(static_cast<size_t>(l) + 1, Vector(static_cast<size_t>(l) + 1));
    for (int k = 0; k <= l; ++k)
      for (int s = 0; s <= l; ++s) X[static_cast<size_t>(k)][static_cast<size_t>(s)] = nq(Q, -static_cast<long>(k) * s);
    for (int s = 0; s <= l; ++s) dl[static_cast<size_t>(s)][static_cast<size_t>(s)] = nq(Q, 2L * n * s);
    if (mat_mul(X, dl) != S.M.back()) throw std::runtime_error("M_l factorization failed");
    S.X.push_back(X);
    S.delta.push_back(dl);
  }
  S.Delta.assign(L + 1, Vector(L + 1));
  for (int l = 0; l <= L; ++l) {
    Vector d = d_coeffs(l, n, Q);
    for (int i = 0; i <= l; ++i) S.Delta[static_cast<size_t>(i)][static_cast<size_t>(l)] = d[static_cast<size_t>(i)];
  }
  S.A = mat_mul(S.M[static_cast<size_t>(L)], S.Delta);
  for (int j = 0; j <= L; ++j)
    for (int l = 0; l <= L; ++l) {
      const ExactScalar& a = S.A[static_cast<size_t>(j)][static_cast<size_t>(l)];
      if ((j < l && !a.is_zero()) || (j == l && !a.is_one())) throw std::runtime_error("A table not unit triangular");
    }
  Vector rhs(static_cast<size_t>(L) + 1);
  rhs[0] = -nq(Q, -2L * n * n);
  rhs[static_cast<size_t>(n)] = nq(Q, -4L * n * n);
  S.K = solve_linear(S.Delta, rhs);
  Vector rhs417(static_cast<size_t>(L) + 1);
  for (int k = 1; k <= L; ++k)
    rhs417[static_cast<size_t>(k)] = nq(Q, static_cast<long>(n) * (2 * n - k) - 4L * n * n) - nq(Q, -2L * n * n);
  if (mat_vec(S.A, S.K) != rhs417) throw std::runtime_error("K cross-check failed");

  // recurrence path
  Vector R(static_cast<size_t>(L) + 1);
  auto dd = [&](int i) { return S.Delta[static_cast<size_t>(i)][static_cast<size_t>(i)]; };
  ExactScalar dK = nq(Q, -4L * n * n);
  R[static_cast<size_t>(n)] = dK / dd(n);
  for (int l = 1; l <= n - 1; ++l) {
    dK *= nq(Q, n + l) * (nq(Q, n) - nq(Q, l - 1)) / (nq(Q, l) - ExactScalar(1));
    R[static_cast<size_t>(n - l)] = dK / dd(n - l);
  }
  if (R != S.K) throw std::runtime_error("K cross-check failed");
  return S;
}

Vector K_consts(int n, const QField& Q) { return kd_system(n, Q).K; }
Matrix A_table(int n, const QField& Q) { return kd_system(n, Q).A; }

// ---------------------------------------------------------------- D constants

ExactScalar D_const(const Partition& lam, int n, const QField& Q, const CZeroConfig& cfg) {
  if (lam.size() != 2 * n || !lam.nonneg()) throw std::invalid_argument("D_const: need a nonnegative partition with 2n parts");
  const int E0 = lam.E(0), E1 = lam.E(1);
  const ExactScalar Pn = prod_one_minus_inv(Q, 1, n);
  ExactScalar D = Q.q_pow(static_cast<long>(n) * n) * prod_one_minus_inv(Q, n + 1, 2 * n) / Pn * C_const(lam, Q, cfg);
  for (int i = 1; i <= n; ++i) {
    for (int p = std::max(i - E0, 0); p <= std::min(i, E1); ++p) {
      ExactScalar t = C_const(lam.minus(p).vee(i), Q, cfg);
      t *= prod_one_minus_inv(Q, 1, 2 * n - i) / (Q.q_pow(-3L * n * n) * Pn * Pn);
      long ex = (n + 1L) * (i - p) + (3L * n - i + 1) * (n - i) / 2 - 4L * n * n;
      t *= nq(Q, ex);
      if ((i - p) % 2 != 0) t = -t;
      ExactScalar num(1), den(1);
      for (int j = 1; j <= n - p; ++j) num *= nq(Q, n) - nq(Q, j - 1);
      for (int j = 1; j <= i - p; ++j) den *= nq(Q, j) - ExactScalar(1);
      for (int j = 1; j <= n - i; ++j) den *= nq(Q, j) - ExactScalar(1);
      t *= num / den;
      t *= prod_one_minus_inv(Q, 1, E0) * prod_one_minus_inv(Q, 1, E1) /
           (prod_one_minus_inv(Q, 1, E0 - i + p) * prod_one_minus_inv(Q, 1, E1 - p));
      t *= Q.q_pow(static_cast<long>(p) * (4 * n - 2 * E0 - p));
      D += t;
    }
  }
  return D;
}

ExactScalar D_const_raw(const Partition& lam, int n, const QField& Q, const CZeroConfig& cfg) {
  if (lam.size() != 2 * n || !lam.nonneg()) throw std::invalid_argument("D_const: need a nonnegative partition with 2n parts");
  KDSystem S = kd_system(n, Q);
  const ExactScalar W = W_nn_closed(n, Q);
  const ExactScalar aLam = self_density(lam, Q);
  ExactScalar D = prod_one_minus_inv(Q, 1, 2 * n) * C_const(lam, Q, cfg) / (nq(Q, 2L * n * n) * W);
  for (int i = 0; i <= 2 * n; ++i) {
    const ExactScalar& K = S.K[static_cast<size_t>(i)];
    if (K.is_zero()) continue;
    for (int p = 0; p <= std::min(i, lam.E(1)); ++p) {
      if (lam.E(0) + p < i) continue;
      Partition mu = lam.minus(p).vee(i);
      D += C_const(mu, Q, cfg) / self_density(mu, Q) * prod_one_minus_inv(Q, 1, 2 * n - i) * K *
           S.Delta[static_cast<size_t>(p)][static_cast<size_t>(i)] * aLam / W;
    }
  }
  return D;
}

FrakB frakb0(int i, int n, const QField& Q) {
  if (i < 0 || i > n - 1) throw std::invalid_argument("frakb0: need 0 <= i <= n-1");
  BetaSystem S = beta_consts(n, 0, Q);
  const ExactScalar b = S.beta(i);
  std::vector<int> parts(static_cast<size_t>(2 * n), 0);
  for (int j = 0; j < i; ++j) parts[static_cast<size_t>(j)] = 1;
  FrakB r;
  r.defining = nq(Q, -4L * i * n) * b * self_density(Partition(parts), Q) / W_nn_closed(n, Q);
  const ExactScalar Pn = prod_one_minus_inv(Q, 1, n);
  r.expanded = b * nq(Q, -4L * i * n + static_cast<long>(i) * i + 3L * n * n) * prod_one_minus_inv(Q, 1, 2 * n - i) *
               prod_one_minus_inv(Q, 1, i) / (Pn * Pn);
  r.agree = r.defining == r.expanded;
  return r;
}

// ---------------------------------------------------------------- F_0

int B_stat(int k, const YClass& Y) {
  int r = 0;
  for (int e : Y.e()) r += std::min(0, e + k) - std::min(0, e);
  return r;
}

int B_pair(const Partition& alpha, const Partition& eta) {
  int r = 0;
  for (int a : alpha.parts())
    for (int h : eta.parts()) r += std::min(a, h);
  return r;
}

ExactScalar f_weight(const YClass& Y, const QField& Q) {
  long ex = 0;
  for (int e : Y.e()) ex += std::min(0, e);
  return nq(Q, ex * Y.size());
}

ExactScalar F0_closed(const YClass& Y, const Partition& lam, const QField& Q) {
  int b = 0;
  for (int x : lam.parts()) b += B_stat(x, Y);
  return nq(Q, b) * f_weight(Y, Q);
}

ExactScalar F0_eta(const Partition& eta, const Partition& alpha, const QField& Q) {
  return nq(Q, B_pair(alpha, eta) - static_cast<long>(eta.size()) * eta.val());
}

ExactScalar F0p_An(const YClass& Y, int n, const QField& Q) {
  long s = 0;
  for (int e : Y.e()) s += std::min(0, e);
  return ExactScalar(s) * nq(Q, -4L * n * n + static_cast<long>(n) * B_stat(1, Y)) * f_weight(Y, Q);
}

ExactScalar F0p_A0(const YClass& Y, const QField& Q) {
  long s = 0;
  for (int e : Y.e()) s += std::min(0, e);
  return ExactScalar(s) * f_weight(Y, Q);
}

Matrix lin_indep_matrix(int n, int k, const QField& Q) {
  auto P = partitions_bounded(n, k);
  Matrix M(P.size(), Vector(P.size()));
  for (size_t r = 0; r < P.size(); ++r)
    for (size_t c = 0; c < P.size(); ++c) M[r][c] = F0_eta(P[r], P[c], Q);
  return M;
}

BlockCheck lin_indep_block_check(int n, int k, const QField& Q) {
  std::vector<Partition> top;
  for (const auto& P : partitions_bounded(n, k))
    if (P.max_part() == k) top.push_back(P);
  auto sub = partitions_bounded(n - 1, k);
  BlockCheck r;
  if (top.size() != sub.size()) return r;
  const size_t m = sub.size();
  Matrix S(m, Vector(m)), F(m, Vector(m)), Ss(m, Vector(m)), Fs(m, Vector(m)), X(m, Vector(m)), Xt;
  for (size_t a = 0; a < m; ++a) {
    X[a][a] = nq(Q, sub[a].val());
    for (size_t b = 0; b < m; ++b) {
      S[a][b] = nq(Q, B_pair(top[b], top[a]));
      F[a][b] = F0_eta(top[a], top[b], Q);
      Ss[a][b] = nq(Q, B_pair(sub[b], sub[a]));
      Fs[a][b] = F0_eta(sub[a], sub[b], Q);
    }
  }
  Xt = X;  // diagonal
  Matrix rs = mat_mul(mat_mul(Xt, Ss), X);
  Matrix rf = mat_mul(Fs, X);
  r.stripped_ok = r.full_ok = true;
  for (size_t a = 0; a < m; ++a)
    for (size_t b = 0; b < m; ++b) {
      if (S[a][b] != nq(Q, k) * rs[a][b]) r.stripped_ok = false;
      if (F[a][b] != nq(Q, static_cast<long>(k) * (1 - n)) * rf[a][b]) r.full_ok = false;
    }
  return r;
}

// ---------------------------------------------------------------- identities

int check_eq415(int n, const QField& Q, int max_part, std::string* first_failure) {
  KDSystem S = kd_system(n, Q);
  const int L = 2 * n;
  auto Ys = y_classes(L, -4, 4);
  int fails = 0;
  for (int l = 0; l <= L; ++l) {
    Vector d = d_coeffs(l, n, Q);
    for (const auto& lam : partitions_range(L, 0, max_part)) {
      if (lam.E(0) < l) continue;
      for (const auto& Y : Ys) {
        ExactScalar lhs;
        for (int i = 0; i <= l; ++i) lhs += d[static_cast<size_t>(i)] * F0_closed(Y, lam.plus(i), Q);
        ExactScalar rhs = S.A[static_cast<size_t>(Y.E0())][static_cast<size_t>(l)] * F0_closed(Y, lam, Q);
        if (lhs != rhs) {
          if (!fails && first_failure) *first_failure = "l=" + std::to_string(l) + " lam=" + lam.str() + " " + Y.str();
          ++fails;
        }
      }
    }
  }
  return fails;
}

int check_eq418(int n, const QField& Q, int e_bound, const CZeroConfig& cfg, std::string* first_failure) {
  KDSystem S = kd_system(n, Q);
  const int L = 2 * n;
  int fails = 0;
  for (const auto& Y : y_classes(L, -e_bound, e_bound)) {
    ExactScalar lhs = F0p_An(Y, n, Q) - F0p_A0(Y, Q) / nq(Q, 2L * n * n);
    ExactScalar rhs;
    const int b1 = B_stat(1, Y);
    for (int l = 0; l <= L; ++l) {
      const ExactScalar& K = S.K[static_cast<size_t>(l)];
      if (K.is_zero()) continue;
      ExactScalar dsum;
      for (int i = 0; i <= l; ++i) dsum += S.Delta[static_cast<size_t>(i)][static_cast<size_t>(l)] * nq(Q, static_cast<long>(i) * b1);
      if (dsum.is_zero()) continue;
      rhs += K * lambda_sum(L - l, Y, Q, cfg) * dsum;
    }
    rhs *= f_weight(Y, Q);
    if (lhs != rhs) {
      if (!fails && first_failure) *first_failure = Y.str() + " lhs=" + lhs.str() + " rhs=" + rhs.str();
      ++fails;
    }
  }
  return fails;
}

// ---------------------------------------------------------------- export

namespace {
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char c : s) {
    if (c == '"') r += '"';
    r += c;
  }
  return r + "\"";
}
}  // namespace

std::string rows_to_csv(const std::vector<ConstRow>& rows) {
  std::ostringstream os;
  os << "name,indices,q-mode,value\n";
  for (const auto& r : rows)
    os << csv_field(r.name) << ',' << csv_field(r.indices) << ',' << csv_field(r.qmode) << ',' << csv_field(r.value.str()) << '\n';
  return os.str();
}

nlohmann::json rows_to_json(const std::vector<ConstRow>& rows) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rows)
    a.push_back({{"name", r.name}, {"indices", r.indices}, {"q-mode", r.qmode}, {"value", r.value.str()}});
  return a;
}

}  // namespace hermlab
