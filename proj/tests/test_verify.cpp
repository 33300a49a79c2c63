#include "doctest.h"
#include "hermlab/verify.hpp"

using namespace hermlab;

TEST_CASE("prime powers") {
  CHECK(split_prime_power(3) == std::make_pair(3L, 1));
  CHECK(split_prime_power(25) == std::make_pair(5L, 2));
  CHECK_THROWS(split_prime_power(2));
  CHECK_THROWS(split_prime_power(8));
  CHECK_THROWS(split_prime_power(15));
}

TEST_CASE("suite registry and report schema") {
  CHECK(is_suite("all"));
  CHECK(is_suite("remark-n1"));
  CHECK(!is_suite("nope"));
  CHECK_THROWS(run_suite("nope", {}));
  auto checks = run_suite("remark-n1", {});
  REQUIRE(checks.size() == 3);
  for (const auto& c : checks) {
    CHECK(c.suite == "remark-n1");
    CHECK(c.pass);
  }
  auto j = report_json(checks);
  CHECK(j["summary"]["pass"] == 3);
  CHECK(j["summary"]["fail"] == 0);
  CHECK(j["checks"][0].contains("ms"));
  CHECK(!report_json(checks, false)["checks"][0].contains("ms"));
  // a throwing body is a failed check, not an abort
  VerifyConfig bad;
  bad.lattice.cap = 1;
  auto f = run_suite("remark-n1", bad);
  REQUIRE(f.size() == 3);
  CHECK(!f[0].pass);
  CHECK(f[0].lhs.find("desk scale") != std::string::npos);
}
