#include "doctest.h"
#include "hermlab/density.hpp"

#include <cstdio>
#include <fstream>

using namespace hermlab;

namespace {

HermMatrix D3(std::vector<int> e) { return HermMatrix::diag(3, 1, e); }

HermMatrix herm2(long p, long a, long b0, long b1, long d) {
  HermMatrix H(p, 1, 2);
  H.set_num(0, 0, {a, 0});
  H.set_num(1, 1, {d, 0});
  H.set_num(0, 1, {b0, b1});
  H.set_num(1, 0, {b0, -b1});
  return H;
}

}  // namespace

TEST_CASE("count examples") {
  CHECK(count_congruence(D3({0}), D3({0}), 1) == 4);
  // (pi) is zero mod pi, so d = 1 only sees x = 0
  CHECK(count_congruence(D3({0}), D3({1}), 1) == 1);
  for (int d = 2; d <= 4; ++d) CHECK(count_congruence(D3({0}), D3({1}), d) == 0);
}

TEST_CASE("row engine agrees with full enumeration") {
  struct Inst {
    HermMatrix A, B;
    int d;
  };
  std::vector<Inst> corpus = {
      {D3({0}), D3({0}), 1},       {D3({0}), D3({0}), 3},          {D3({0}), D3({2}), 3},
      {D3({1}), D3({1}), 3},       {D3({0, 0}), D3({0}), 2},       {D3({0, 1}), D3({1}), 2},
      {D3({0, 0}), D3({2}), 2},    {D3({0}), D3({0, 0}), 2},       {D3({1}), D3({1, 1}), 2},
      {D3({0, 0}), D3({0, 0}), 1}, {D3({0, 0}), D3({1, 0}), 1},    {D3({0, 0, 0}), D3({0, 0}), 1},
      {D3({0, 0}), herm2(3, 1, 1, 1, 0), 1}, {D3({0, 0, 1}), D3({0, 1}), 1},
  };
  for (const auto& c : corpus) {
    mpz_class fast = count_congruence(c.A, c.B, c.d);
    DensityOptions g;
    g.force_generic = true;
    mpz_class gen = count_congruence(c.A, c.B, c.d, {}, g);
    mpz_class naive = count_naive(c.A, c.B, c.d);
    INFO(c.A.str() << " " << c.B.str() << " d=" << c.d);
    CHECK(fast == naive);
    CHECK(gen == naive);
  }
}

TEST_CASE("dual-column domains agree with full enumeration") {
  // rows with pi^{-1} restrict the dual columns
  HermMatrix A = D3({0, -1});
  CHECK(count_congruence(A, D3({0}), 1, {1}) == count_naive(A, D3({0}), 1, {1}));
  CHECK(count_congruence(A, D3({-1}), 1, {1}) == count_naive(A, D3({-1}), 1, {1}));
  CHECK(count_congruence(A, D3({-1}), 1, {0}) == count_naive(A, D3({-1}), 1, {0}));
  // mixed columns: implied and not implied constraints
  HermMatrix A1 = D3({-1});
  for (auto B : {D3({-1, 0}), D3({0, -1}), D3({0, 0}), D3({-1, -1})}) {
    INFO(B.str());
    CHECK(count_congruence(A1, B, 1, {1}) == count_naive(A1, B, 1, {1}));
  }
}

TEST_CASE("non-diagonal A uses its Jordan form") {
  HermMatrix A = herm2(3, 0, 1, 0, 0);  // hyperbolic plane, type (0,0)
  CHECK(count_congruence(A, D3({0}), 2) == count_naive(A, D3({0}), 2));
  CHECK(count_congruence(A, D3({1}), 2) == count_naive(A, D3({1}), 2));
}

TEST_CASE("self-density anchors") {
  for (long q : {3L, 5L}) {
    auto one = HermMatrix::identity(q, 1, 1);
    CHECK(alpha(one, one) == ExactScalar::rational(q + 1, q));
    for (int k = 1; k <= 4; ++k) {
      auto pk = HermMatrix::diag(q, 1, {k});
      long v = 1;
      for (int i = 1; i < k; ++i) v *= q;
      CHECK(alpha(pk, pk) == ExactScalar(v * (q + 1)));
    }
  }
  auto one2 = HermMatrix::identity(3, 1, 2);
  CHECK(alpha(one2, one2) == ExactScalar::rational(4 * 8, 27));
}

TEST_CASE("parity obstruction") {
  CHECK(alpha(D3({0}), D3({1})).is_zero());
  CHECK(alpha(D3({0, 0}), D3({1, 0})).is_zero());
  CHECK(alpha(D3({1, 0}), D3({1, 1})).is_zero());
  // one variable cannot represent (pi), padded ones can: the series is
  // (1 - X) alpha(1_1, 1_1; X), vanishing only at X = 1
  auto s1 = alpha_series(D3({0}), D3({1}));
  CHECK(s1.eval(1).is_zero());
  CHECK(s1 == XPolynomial({ExactScalar(1), ExactScalar(-1)}) * alpha_series(D3({0}), D3({0})));
}

TEST_CASE("density series") {
  auto one = D3({0});
  auto s = alpha_series(one, one);
  CHECK(s.eval(1) == ExactScalar::rational(4, 3));
  CHECK(alpha_prime(one, one) / alpha(one, one) == ExactScalar::rational(-1, 4));
  // overlattice identity for (pi^2): ratio (1 - X) + X^2
  auto s2 = alpha_series(one, D3({2}));
  XPolynomial expect({ExactScalar(1), ExactScalar(-1), ExactScalar(1)});
  CHECK(s2 == expect * s);
}

TEST_CASE("weighted densities") {
  CHECK(weighted_W(1, 1, a_t_matrix(1, 1), 0) == ExactScalar::rational(16, 243));
  // W_{0,0} is the plain density of 1_2
  auto B = D3({1, 1});
  CHECK(weighted_W(0, 0, B, 0) == alpha(HermMatrix::identity(3, 1, 2), B));
  // W_{0,1}(B,0) = (-q)^{-4} alpha(A_{(1,0)}, B)
  CHECK(weighted_W(0, 1, B, 0) == alpha(D3({1, 0}), B) / ExactScalar(81));
}

TEST_CASE("invariance under unimodular change of B") {
  // [[1,1],[1,2]] ~ 1_2; [[pi, pi],[pi, 2pi]] ~ pi 1_2
  auto B = herm2(3, 1, 1, 0, 2);
  CHECK(alpha(D3({0, 0}), B) == alpha(D3({0, 0}), D3({0, 0})));
  auto Bp = herm2(3, 3, 3, 0, 6);
  CHECK(alpha(D3({1, 0}), Bp) == alpha(D3({1, 0}), D3({1, 1})));
}

TEST_CASE("disk cache round trip") {
  std::string path = "density_cache_test.jsonl";
  std::remove(path.c_str());
  {
    CountCache c(path);
    DensityOptions o;
    o.cache = &c;
    CHECK(count_congruence(D3({0}), D3({0}), 2, {}, o) == count_congruence(D3({0}), D3({0}), 2));
  }
  CountCache c2(path);
  mpz_class v;
  bool found = false;
  // the only record is the one just written
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) found = true;
  CHECK(found);
  std::remove(path.c_str());
}
