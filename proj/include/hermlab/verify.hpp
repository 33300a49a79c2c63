#pragma once
// Verification suites behind `hermlab verify`.  Every value is serialized
// exactly; a failing check never aborts a suite.

#include <string>
#include <vector>

#include "hermlab/lattice.hpp"
#include "json.hpp"

namespace hermlab {

struct Check {
  std::string suite;
  std::string name;
  std::string anchor;    // the identity or table being exercised
  std::string instance;  // inputs
  std::string lhs, rhs;
  bool pass = false;
  long ms = 0;
};

struct VerifyConfig {
  long q = 3;  // prime power for concrete suites
  CZeroConfig cz;
  DensityOptions density;
  OverlatticeOptions lattice;
};

const std::vector<std::string>& suite_names();  // without "all"
bool is_suite(const std::string& name);          // includes "all"
std::vector<Check> run_suite(const std::string& name, const VerifyConfig& cfg);

// {checks:[...], summary:{pass, fail}}; with timing = false every ms is omitted
nlohmann::json report_json(const std::vector<Check>& checks, bool timing = true);

// q = p^f with p an odd prime, or throws std::invalid_argument
std::pair<long, int> split_prime_power(long q);

std::string vec_str(const Vector& v);

}  // namespace hermlab
