#include "doctest.h"
#include "hermlab/lattice.hpp"

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

const QField Q3 = QField::concrete(3);

}  // namespace

TEST_CASE("unimodular lattice has no proper integral overlattice") {
  for (int k = 1; k <= 3; ++k) {
    auto m = type_counts(D3(std::vector<int>(static_cast<size_t>(k), 0)));
    REQUIRE(m.size() == 1);
    CHECK(m.begin()->first == Partition(std::vector<int>(static_cast<size_t>(k), 0)));
    CHECK(m.begin()->second == 1);
  }
  CHECK_THROWS_WITH(overlattices(D3({-1}), true), "no integral structure");
}

TEST_CASE("small overlattice counts") {
  auto m1 = type_counts(D3({2}));
  CHECK(m1.size() == 2);
  CHECK(m1[Partition({2})] == 1);
  CHECK(m1[Partition({0})] == 1);
  auto m2 = type_counts(D3({1, 1}));
  CHECK(m2.size() == 2);
  CHECK(m2[Partition({1, 1})] == 1);
  // isotropic lines of the residue form x xbar + y ybar over F_9: q + 1 = 4
  CHECK(m2[Partition({0, 0})] == 4);
}

TEST_CASE("lattice invariants") {
  for (auto e : {std::vector<int>{3}, {2, 1}, {2, 2}, {3, 1}}) {
    HermMatrix B = D3(e);
    for (const auto& L : overlattices(B, true)) {
      CHECK(2 * L.inv.ell == B.det_valuation() - L.inv.val);
      CHECK(classify_type(L.gram) == L.inv.type);
    }
  }
  // non-integral overlattices are included without integral_only
  int nonint = 0;
  for (const auto& L : overlattices(D3({1}), false)) nonint += !L.integral;
  CHECK(nonint == 1);
}

TEST_CASE("counts match local density ratios") {
  std::vector<HermMatrix> corpus;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= a; ++b) corpus.push_back(D3({a, b}));
  corpus.push_back(herm2(3, 3, 1, 1, 3));
  corpus.push_back(D3({1, 0, 1}));
  for (const auto& B : corpus) {
    CAPTURE(B.str());
    for (const auto& [lam, cnt] : type_counts(B)) {
      CAPTURE(lam.str());
      HermMatrix A = gram_of_partition(lam, 3, 1);
      CHECK(ExactScalar(cnt) * self_density(lam, Q3) == alpha(A, B));
    }
  }
}

TEST_CASE("series examples and value at one") {
  XPolynomial X = XPolynomial::monomial(ExactScalar(1), 1);
  XPolynomial one = XPolynomial::constant(ExactScalar(1));
  CHECK(cho_yamauchi_series(D3({1})) == one - X);
  CHECK(cho_yamauchi_series(D3({2})) == one - X + X * X);
  for (auto e : {std::vector<int>{3}, {1, 1}, {2, 1}, {2, 0}}) {
    HermMatrix B = D3(e);
    const int k = static_cast<int>(e.size());
    HermMatrix I = D3(std::vector<int>(static_cast<size_t>(k), 0));
    CHECK(cho_yamauchi_series(B).eval(ExactScalar(1)) == alpha(I, B) / alpha(I, I));
  }
}

TEST_CASE("functional equation") {
  for (auto e : {std::vector<int>{1}, {2}, {3}, {1, 1}, {2, 1}, {2, 2}, {3, 1}, {1, 1, 1}}) {
    auto r = check_functional_equation(D3(e));
    CAPTURE(r.report);
    CHECK(r.ok);
  }
  auto r = check_functional_equation(herm2(3, 3, 1, 1, 3));
  CHECK(r.ok);
}

TEST_CASE("derivative through C constants") {
  for (auto e : {std::vector<int>{1}, {2}, {3}, {1, 1}, {2, 1}}) {
    HermMatrix B = D3(e);
    const int k = static_cast<int>(e.size());
    HermMatrix I = D3(std::vector<int>(static_cast<size_t>(k), 0));
    CAPTURE(B.str());
    CHECK(derivative_sum_C(B) == alpha_prime(I, B) / alpha(I, I));
  }
}

TEST_CASE("intersection number at n = 1") {
  for (auto e : {std::vector<int>{1, 1}, {2, 0}, {2, 2}, {3, 1}, {1, 0}, {2, 1}}) {
    HermMatrix B = D3(e);
    CAPTURE(B.str());
    auto r = intersection_number(B, 1);
    CHECK(r.density_complete);
    CHECK(r.agree);
    CHECK(r.value == r.density_value);
    ExactScalar dsum, bsum;
    for (const auto& t : r.terms) {
      (t.kind == "D" ? dsum : bsum) += t.coeff * ExactScalar(t.count);
      // odd val det B admits no lattice of even type
      if (B.det_valuation() % 2 != 0 && t.lam.val() % 2 == 0) {
        CHECK(t.count == 0);
        CHECK(t.density_ratio == ExactScalar(0));
      }
    }
    // the D part is the derivative of the weighted representation density
    CHECK(dsum == weighted_W_prime(0, 1, B) / W_nn_closed(1, Q3));
    CHECK(r.value == dsum + bsum);
  }
  auto r = intersection_number(D3({1, 1}), 1);
  const QField Q = Q3;
  CHECK(r.value == D_const(Partition({1, 1}), 1, Q) + ExactScalar(4) * D_const(Partition({0, 0}), 1, Q) -
                       ExactScalar(4) * frakb0(0, 1, Q).defining);
  CHECK_THROWS(intersection_number(D3({1, 1, 1}), 1));
}

TEST_CASE("n = 1 lattice-count identity") {
  for (auto e : {std::vector<int>{0, 2}, {1, 3}, {2, 2}}) {
    auto r = n1_remark_check(D3(e));
    CAPTURE(r.long_form.str());
    CAPTURE(r.short_form.str());
    CHECK(r.ok);
  }
  CHECK_THROWS(n1_remark_check(D3({1, 2})));
  CHECK_THROWS(n1_remark_check(D3({2, 1})));
  HermMatrix B2 = divide_last_by_pi(D3({1, 3}));
  CHECK(B2 == D3({1, 1}));
}
