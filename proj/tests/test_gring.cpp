#include "doctest.h"
#include "hermlab/gring.hpp"

#include <map>
#include <random>

using namespace hermlab;

TEST_CASE("defining polynomials") {
  CHECK(RingCtx(3, 1, 1).defining_poly() == std::vector<int64_t>{1, 0});
  CHECK(RingCtx(5, 1, 1).defining_poly() == std::vector<int64_t>{2, 0});
  CHECK(RingCtx(7, 1, 1).defining_poly() == std::vector<int64_t>{1, 0});
}

TEST_CASE("conjugation, norm, trace on F_9") {
  RingCtx R(3, 1, 1);
  RingElem w = R.omega();
  CHECK(R.conj(w) == R.neg(w));
  CHECK(R.norm(w) == R.one());
  CHECK(R.norm(R.one()) == R.one());
  CHECK(R.trace(R.one()) == R.from_int(2));
  int cnt = 0;
  for (const auto& x : R.all_elements()) cnt += R.norm(x) == R.one();
  CHECK(cnt == 4);
}

TEST_CASE("ring invariants at q=3, d<=2 and f=2") {
  for (auto [p, f, d] : std::vector<std::tuple<int, int, int>>{{3, 1, 1}, {3, 1, 2}, {5, 1, 2}, {3, 2, 1}}) {
    RingCtx R(p, f, d);
    auto all = R.all_elements();
    size_t units = 0, fixed = 0;
    std::map<uint64_t, size_t> fibers;
    for (const auto& x : all) {
      CHECK(R.conj(R.conj(x)) == x);
      CHECK(R.is_fixed(R.norm(x)));
      CHECK(R.is_fixed(R.trace(x)));
      fixed += R.is_fixed(x);
      if (R.is_unit(x)) {
        ++units;
        fibers[R.index(R.norm(x))]++;
        CHECK(R.mul(x, R.inverse(x)) == R.one());
      }
    }
    size_t q2d = all.size(), q2d2 = q2d / (R.q() * R.q());
    CHECK(units == q2d - q2d2);
    // fixed subring has q^d elements
    size_t qd = 1;
    for (int i = 0; i < d; ++i) qd *= R.q();
    CHECK(fixed == qd);
    // norm onto fixed units with equal fibers
    CHECK(fibers.size() == qd - qd / R.q());
    for (auto& [k, v] : fibers) CHECK(v == fibers.begin()->second);
  }
}

TEST_CASE("valuation") {
  RingCtx R(3, 1, 3);
  CHECK(R.valuation(R.one()) == 0);
  CHECK(R.valuation(R.from_int(3) * R.omega()) == 1);
  CHECK(R.valuation(R.zero()) == 3);
  CHECK(R.valuation(R.from_int(9)) == 2);
}

TEST_CASE("conj is a ring automorphism") {
  RingCtx R(3, 2, 3);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    RingElem a = R.from_index(rng() % R.size()), b = R.from_index(rng() % R.size());
    CHECK(R.conj(a * b) == R.conj(a) * R.conj(b));
    CHECK(R.conj(a + b) == R.conj(a) + R.conj(b));
  }
}
