#include "doctest.h"
#include "hermlab/closedform.hpp"

#include <map>
#include <random>
#include <tuple>

using namespace hermlab;

namespace {

const QField S = QField::symbolic();
ExactScalar q() { return S.q(); }
ExactScalar one() { return ExactScalar(1); }
Partition P(std::vector<int> v) { return Partition(std::move(v)); }

}  // namespace

TEST_CASE("m(a;X) and m(a)") {
  CHECK(m_poly(S, 0) == XPolynomial::constant(one()));
  CHECK(m_deriv(S, 0).is_zero());
  CHECK(m_poly(S, 1) == XPolynomial({one(), ExactScalar(-1)}));
  CHECK(m_deriv(S, 1) == one());
  CHECK(m_deriv(S, 2) == one() + q());
  for (int a = 1; a <= 6; ++a) CHECK(m_deriv(S, a) == c_product(S, a));
}

TEST_CASE("C constants") {
  CHECK(C_const(P({3}), S) == one());
  CHECK(C_const(P({2}), S) == ExactScalar(-1));
  CHECK(C_const(P({2, 1}), S) == one() + q());
  CHECK(C_const(P({0, 0}), S) == -(q() - ExactScalar(2)) / (q() * q() - one()));
  CHECK(C_const(P({0}), S) == ExactScalar(-1) / (q() + one()));
  CHECK_THROWS_WITH(C_const(P({0, 0, 0}), S), "requires concrete q");
}

TEST_CASE("C zero: shipped values, density and the series path agree") {
  for (long qq : {3L, 5L}) {
    QField Q = QField::concrete(qq);
    for (int k = 1; k <= (qq == 3 ? 4 : 2); ++k) {
      ExactScalar shipped = C_zero(k, Q);
      CHECK(C_zero_series(k, Q) == shipped);
      // alpha(1_k,1_k;X) = prod_{j<=k} (1 - (-q)^{-j} X) gives sum_j 1/((-q)^j - 1)
      ExactScalar ref;
      for (int j = 1; j <= k; ++j) ref += one() / (Q.negq_pow(j) - one());
      CHECK(shipped == ref);
    }
  }
  // density path, not shipped
  CZeroConfig cfg;
  QField Q5 = QField::concrete(5);
  CHECK(!C_zero_cached(3, Q5));
  ExactScalar v = C_zero(3, Q5, cfg);
  CHECK(C_zero_cached(3, Q5));
  CHECK(v == C_zero_series(3, Q5));
  // symbolic series path reproduces the two known closed forms
  CHECK(C_zero_series(1, S) == C_zero(1, S));
  CHECK(C_zero_series(2, S) == C_zero(2, S));
}

TEST_CASE("self-densities") {
  CHECK(self_density_diag({{0, 3}}, S) == prod_one_minus_inv(S, 1, 3));
  CHECK(self_density_diag({{1, 2}}, S) == q() * (q() + one()) * (q() * q() - one()));
  for (int lb = 2; lb <= 4; ++lb)
    CHECK(self_density_diag({{lb, 1}, {0, 1}}, S) == S.q_pow(lb - 2) * (q() + one()) * (q() + one()));
  CHECK_THROWS(self_density_diag({{0, 1}, {1, 1}}, S));
  // alpha(pi^k, pi^k) = q^{k-1}(q+1)
  for (int k = 0; k <= 4; ++k) CHECK(self_density(P({k}), S) == S.q_pow(k - 1) * (q() + one()));
}

TEST_CASE("beta system: solver, closed form and factorization") {
  for (int n = 1; n <= 4; ++n)
    for (int h = 0; h <= n; ++h) {
      BetaSystem B = beta_consts(n, h, S);
      CHECK(B.factorization_ok);
      // solver output; vanishes at h = n
      CHECK(B.delta() == ExactScalar(h - n));
      for (int i = 0; i < 2 * n; ++i) CHECK(B.solution[static_cast<size_t>(i)] == B.closed[static_cast<size_t>(i)]);
    }
}

TEST_CASE("d coefficients") {
  CHECK(d_coeffs(0, 1, S)[0] == one());
  for (int n = 1; n <= 3; ++n)
    for (int l = 0; l <= 2 * n; ++l) {
      Vector d = d_coeffs(l, n, S);
      for (int i = 0; i + 1 <= l; ++i) {
        ExactScalar ratio = -S.negq_pow(n + 1) * (S.negq_pow(n) - S.negq_pow(n - i - 1)) / (S.negq_pow(l - i) - one());
        CHECK(d[static_cast<size_t>(i)] / d[static_cast<size_t>(i + 1)] == ratio);
      }
    }
  // l = 1, n = 1 at q = 3 by hand: M = [[1, 9], [1, -3]], d = (3/4, -1/12)... solved below
  QField Q = QField::concrete(3);
  Vector d = d_coeffs(1, 1, Q);
  CHECK(d[0] + ExactScalar(9) * d[1] == ExactScalar(0));
  CHECK(d[0] - ExactScalar(3) * d[1] == one());
}

TEST_CASE("K constants and the A table") {
  for (int k = 1; k <= 12; ++k) CHECK(telescoping_sum(k, S) == one());
  for (int n = 1; n <= 3; ++n) {
    KDSystem K = kd_system(n, S);
    CHECK(K.K[0].is_zero());
    for (int i = n + 1; i <= 2 * n; ++i) CHECK(K.K[static_cast<size_t>(i)].is_zero());
    CHECK(K.K[static_cast<size_t>(n)] == S.negq_pow(-4L * n * n) / K.Delta[static_cast<size_t>(n)][static_cast<size_t>(n)]);
    for (int l = 0; l <= 2 * n; ++l) CHECK(K.A[static_cast<size_t>(l)][static_cast<size_t>(l)].is_one());
  }
  // n = 1 table at q = 3 by an independent product
  QField Q = QField::concrete(3);
  Matrix A = A_table(1, Q);
  for (int l = 0; l <= 2; ++l) {
    Vector d = d_coeffs(l, 1, Q);
    for (int j = 0; j <= 2; ++j) {
      ExactScalar s;
      for (int i = 0; i <= l; ++i) s += Q.negq_pow(static_cast<long>(i) * (2 - j)) * d[static_cast<size_t>(i)];
      CHECK(A[static_cast<size_t>(j)][static_cast<size_t>(l)] == s);
    }
  }
}

TEST_CASE("D constants at n = 1 reproduce the six-row table") {
  for (long qq : {3L, 5L, 7L}) {
    QField Q = QField::concrete(qq);
    ExactScalar qv(qq);
    for (int a : {2, 3, 4, 5}) {
      for (int b = 2; b <= a; ++b) {
        int sgn = (a + b) % 2 ? -1 : 1;
        CHECK(D_const(P({a, b}), 1, Q) == ExactScalar(-sgn) * (qv * qv - one()));
      }
      int s1 = (a + 1) % 2 ? -1 : 1, s0 = a % 2 ? -1 : 1;
      CHECK(D_const(P({a, 0}), 1, Q) == ExactScalar(s0));
      // the derivation gives (-1)^{sum}; the summary table prints -(-1)^{sum}
      CHECK(D_const(P({a, 1}), 1, Q) == ExactScalar(s1));
    }
    CHECK(D_const(P({1, 1}), 1, Q) == -(qv - one()));
    CHECK(D_const(P({1, 0}), 1, Q) == -(qv + ExactScalar(2)) / (qv + one()));
    CHECK(D_const(P({0, 0}), 1, Q) == one() / (qv + one()));
  }
  CHECK(D_const(P({0, 0}), 1, S) == one() / (q() + one()));
}

TEST_CASE("D constants: closed formula equals raw extraction and depends on (E0, E1, parity)") {
  QField Q = QField::concrete(3);
  for (int n = 1; n <= 2; ++n) {
    std::map<std::tuple<int, int, int>, ExactScalar> seen;
    for (const auto& lam : partitions_range(2 * n, 0, 4)) {
      ExactScalar d = D_const(lam, n, Q);
      INFO("n=" << n << " lam=" << lam.str());
      CHECK(d == D_const_raw(lam, n, Q));
      auto key = std::make_tuple(lam.E(0), lam.E(1), lam.val() % 2);
      auto it = seen.find(key);
      if (it == seen.end())
        seen[key] = d;
      else
        CHECK(it->second == d);
    }
  }
  for (const auto& lam : partitions_range(2, 0, 3)) CHECK(D_const(lam, 1, S) == D_const_raw(lam, 1, S));
}

TEST_CASE("frak b_i^0: both expressions") {
  QField Q = QField::concrete(3);
  FrakB b = frakb0(0, 1, S);
  BetaSystem B = beta_consts(1, 0, S);
  ExactScalar p1 = prod_one_minus_inv(S, 1, 1);
  CHECK(b.defining == B.beta(0) * S.q_pow(3) * prod_one_minus_inv(S, 1, 2) / (p1 * p1));
  // (-1)^{i^2+3n^2} separates the two forms when i + n is odd
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < n; ++i) {
      FrakB r = frakb0(i, n, Q);
      CHECK(r.agree == ((i + n) % 2 == 0));
      if (!r.agree) CHECK(r.defining == -r.expanded);
    }
}

TEST_CASE("F0 closed forms") {
  QField Q = QField::concrete(3);
  CHECK(F0_closed(YClass({0, 2, 1}), P({3, 1, 0}), Q) == one());
  YClass Y({-2, 0, 1});
  CHECK(F0_closed(Y, P({0, 0, 0}), Q) == f_weight(Y, Q));
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> ex(-3, 3), pt(0, 3);
  for (int it = 0; it < 300; ++it) {
    int n = 1 + it % 3;
    std::vector<int> e, a;
    for (int j = 0; j < n; ++j) {
      e.push_back(ex(rng));
      a.push_back(pt(rng));
    }
    YClass Yr(e);
    std::vector<int> eta;
    for (int x : e) eta.push_back(std::max(0, -x));
    CHECK(F0_closed(Yr, P(a), Q) == F0_eta(P(eta), P(a), Q));
    CHECK(F0_closed(YClass::canonical(P(eta)), P(a), Q) == F0_closed(Yr, P(a), Q));
  }
  CHECK(B_stat(2, YClass({-3, -1, 0})) == 3);
  CHECK(B_pair(P({2, 1}), P({3, 0})) == 3);
}

TEST_CASE("lambda sums are the sum of min(0, e_j)") {
  QField Q = QField::concrete(3);
  for (int N = 1; N <= 3; ++N)
    for (const auto& E : partitions_range(N, -3, 2)) {
      YClass Y(E.parts());
      long s = 0;
      for (int e : Y.e()) s += std::min(0, e);
      INFO(Y.str());
      CHECK(lambda_sum(N, Y, Q) == ExactScalar(s));
    }
  for (const auto& E : partitions_range(2, -2, 1)) {
    YClass Y(E.parts());
    long s = 0;
    for (int e : Y.e()) s += std::min(0, e);
    CHECK(lambda_sum(2, Y, S) == ExactScalar(s));
  }
}

TEST_CASE("linear independence matrices") {
  QField Q = QField::concrete(3);
  CHECK(lin_indep_matrix(1, 1, S).size() == 2);
  CHECK(!determinant(lin_indep_matrix(1, 1, S)).is_zero());
  CHECK(!determinant(lin_indep_matrix(2, 2, S)).is_zero());
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= 3; ++k) {
      Matrix M = lin_indep_matrix(n, k, Q);
      if (M.size() > 20) continue;
      CHECK(!determinant(M).is_zero());
      BlockCheck b = lin_indep_block_check(n, k, Q);
      CHECK(b.stripped_ok);
      CHECK(b.full_ok);
    }
}

TEST_CASE("function identities") {
  std::string why;
  CHECK(check_eq415(1, S, 3, &why) == 0);
  QField Q = QField::concrete(3);
  CHECK(check_eq415(2, Q, 2, &why) == 0);
  CHECK(check_eq418(1, S, 3, {}, &why) == 0);
  CHECK(check_eq418(1, Q, 4, {}, &why) == 0);
  CHECK(check_eq418(2, Q, 2, {}, &why) == 0);
}

TEST_CASE("table export") {
  std::vector<ConstRow> rows = {{"C", "(2,1)", "symbolic", one() + q()}, {"K", "1", "q=3", ExactScalar::rational(-1, 9)}};
  std::string csv = rows_to_csv(rows);
  CHECK(csv.rfind("name,indices,q-mode,value\n", 0) == 0);
  CHECK(csv.find("\"(2,1)\"") != std::string::npos);
  auto j = rows_to_json(rows);
  CHECK(j.size() == 2);
  CHECK(j[1]["value"] == "-1/9");
}
