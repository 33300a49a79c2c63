#include "doctest.h"
#include "hermlab/exact.hpp"

#include <random>

using namespace hermlab;

TEST_CASE("scalar arithmetic, concrete and symbolic") {
  ExactScalar a = ExactScalar::rational(3, 4), b = ExactScalar::rational(-1, 6);
  CHECK((a + b).str() == "7/12");
  CHECK((a * b).str() == "-1/8");
  CHECK(ExactScalar(6).str() == "6");

  QField S = QField::symbolic();
  ExactScalar q = S.q();
  ExactScalar x = (q + 1) * (q + 1) / q.pow(5);
  CHECK(x.at(3).str() == "16/243");
  ExactScalar y = (q * q - 1) / (q - 1);
  CHECK(y == q + 1);
  CHECK(((q + 1) / (q * q - 1)) * (q - 1) == ExactScalar(1));
  CHECK(S.negq_pow(-3) == ExactScalar(-1) / (q * q * q));
  // (q+1)/q as "num/den"
  CHECK(((q + 1) / q).str() == "(q+1)/q");
}

TEST_CASE("polynomial gcd against planted factors") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto rp = [&](int deg) {
      ZPoly p(deg + 1);
      for (auto& c : p) c = static_cast<long>(rng() % 21) - 10;
      p.back() = static_cast<long>(rng() % 5) + 1;
      return p;
    };
    ZPoly g = rp(trial % 4 + 1), a = rp(trial % 3 + 1), b = rp(trial % 5 + 1);
    ZPoly A = zpoly::mul(g, a), B = zpoly::mul(g, b);
    ZPoly h = zpoly::gcd(A, B);
    CHECK(zpoly::divides(A, h, nullptr));
    CHECK(zpoly::divides(B, h, nullptr));
    CHECK(zpoly::divides(h, g, nullptr));
  }
}

TEST_CASE("interpolate") {
  using P = std::pair<ExactScalar, ExactScalar>;
  CHECK(interpolate({P{0, 1}, P{1, 1}}) == XPolynomial::constant(1));
  CHECK(interpolate({P{1, 0}, P{-1, 2}}) == XPolynomial({1, -1}));
  // m(2;X) = (1-X)(1+3X) at q=3 from X in {1,-3,9}
  XPolynomial m2 = XPolynomial({1, -1}) * XPolynomial({1, 3});
  std::vector<P> pts;
  for (long x : {1L, -3L, 9L}) pts.push_back({x, m2.eval(x)});
  CHECK(interpolate(pts) == m2);
  CHECK_THROWS_WITH(interpolate({P{2, 1}, P{2, 3}}), "degenerate interpolation nodes");
}

TEST_CASE("interpolation round trip, symbolic coefficients") {
  ExactScalar q = QField::symbolic().q();
  XPolynomial p({q, ExactScalar(1) / q, q * q - 2, ExactScalar(-3)});
  std::vector<std::pair<ExactScalar, ExactScalar>> pts;
  for (long r = 0; r <= 3; ++r) {
    ExactScalar x = QField::symbolic().negq_pow(-2 * r);
    pts.push_back({x, p.eval(x)});
  }
  CHECK(interpolate(pts) == p);
}

TEST_CASE("solve_linear") {
  Matrix I = {{1, 0}, {0, 1}};
  Vector v = {ExactScalar::rational(2, 3), 5};
  CHECK(solve_linear(I, v) == v);
  // Vandermonde on nodes {1,-3}
  Matrix V = {{1, 1}, {1, -3}};
  Vector s = solve_linear(V, {0, 1});
  CHECK(mat_vec(V, s) == Vector{0, 1});
  Matrix Z = {{1, 2}, {2, 4}};
  CHECK_THROWS_WITH(solve_linear(Z, {1, 1}), "singular system");
  ExactScalar q = QField::symbolic().q();
  Matrix W = {{1, q}, {q, ExactScalar(1) / q}};
  Vector w = {q + 1, ExactScalar(2)};
  CHECK(mat_vec(W, solve_linear(W, w)) == w);
}

TEST_CASE("derivative_at_one") {
  CHECK(derivative_at_one(XPolynomial::constant(1)) == ExactScalar(0));
  CHECK(derivative_at_one(XPolynomial({1, -1})) == ExactScalar(1));
  XPolynomial m2 = XPolynomial({1, -1}) * XPolynomial({1, 3});
  CHECK(derivative_at_one(m2) == ExactScalar(4));
  // product rule
  XPolynomial a({2, ExactScalar::rational(1, 3), 5}), b({-1, 4});
  CHECK(derivative_at_one(a * b) == derivative_at_one(a) * b.eval(1) + a.eval(1) * derivative_at_one(b));
}
