// Acceptance driver: runs `verify all --q 3` twice through the CLI, grades
// criteria 1-9 from the first report and criterion 10 by comparing the two.
// Usage: acceptance <path-to-hermlab> [work-dir]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "json.hpp"

using nlohmann::json;

namespace {

struct Criterion {
  int id;
  std::string what;
  long budget_ms;  // 0: none
  std::function<bool(const json&)> select;
};

bool in_suite(const json& c, const std::string& s) { return c["suite"] == s; }
bool name_starts(const json& c, const std::string& p) { return c["name"].get<std::string>().rfind(p, 0) == 0; }

int run(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

json strip_timing(json r) {
  for (auto& c : r["checks"]) c.erase("ms");
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-hermlab> [work-dir]\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::string dir = argc > 2 ? argv[2] : ".";
  const std::string out1 = dir + "/acceptance_run1.json", out2 = dir + "/acceptance_run2.json";

  long wall[2] = {0, 0};
  int rc[2] = {0, 0};
  const std::string outs[2] = {out1, out2};
  for (int i = 0; i < 2; ++i) {
    std::remove(outs[i].c_str());  // never grade a stale report
    auto t0 = std::chrono::steady_clock::now();
    rc[i] = run("\"" + cli + "\" verify all --q 3 --out \"" + outs[i] + "\" > /dev/null");
    wall[i] = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  }
  json rep[2];
  for (int i = 0; i < 2; ++i) {
    std::ifstream in(outs[i]);
    try {
      in >> rep[i];
    } catch (const std::exception& e) {
      std::cout << "[FAIL] could not read report " << outs[i] << ": " << e.what() << "\n";
      return 1;
    }
  }

  const std::vector<Criterion> crit = {
      {1, "closed-form densities alpha(1_k,1_k), alpha(pi^k,pi^k), W_{1,1}(A_1,0), W_{n,n}(A_n,0) by brute force", 300000,
       [](const json& c) { return in_suite(c, "density-oracle") && !name_starts(c, "alpha'"); }},
      {2, "derivative anchors alpha'(1_k,1_k)/alpha(1_k,1_k), k = 1, 2", 600000,
       [](const json& c) { return in_suite(c, "density-oracle") && name_starts(c, "alpha'"); }},
      {3, "overlattice counts times self-density equal alpha(A_lam,B)", 1200000,
       [](const json& c) { return in_suite(c, "lattice-oracle"); }},
      {4, "overlattice series identity and functional equation", 0,
       [](const json& c) { return in_suite(c, "cy") || in_suite(c, "funceq"); }},
      {5, "constants cross-path suite (beta, frak B factorization, d, K, telescoping sum, A table)", 120000,
       [](const json& c) { return in_suite(c, "consts") && !name_starts(c, "D "); }},
      {6, "D_lambda at n = 1 reproduces the six-row table, q in {3,5,7}", 0,
       [](const json& c) { return in_suite(c, "consts") && name_starts(c, "D "); }},
      {7, "W'_{0,1}(B,0)/W_{1,1}(A_1,0) = sum D_lam count at n = 1, q = 3", 1200000,
       [](const json& c) { return in_suite(c, "thm47"); }},
      {8, "function identities on Y in [-4,4], n <= 2, and invertible F0 matrices", 0,
       [](const json& c) { return in_suite(c, "f0"); }},
      {9, "intersection formula: both forms agree, parity vanishing, n = 1 lattice-count identity", 0,
       [](const json& c) { return in_suite(c, "conj49") || in_suite(c, "remark-n1"); }},
  };

  int failed = 0;
  for (const auto& cr : crit) {
    long n = 0, bad = 0, ms = 0;
    std::string first;
    for (const auto& c : rep[0]["checks"]) {
      if (!cr.select(c)) continue;
      ++n;
      ms += c["ms"].get<long>();
      if (!c["pass"].get<bool>()) {
        if (!bad) first = c["name"].get<std::string>() + " [" + c["instance"].get<std::string>() + "]";
        ++bad;
      }
    }
    const bool over = cr.budget_ms && ms > cr.budget_ms;
    const bool ok = n > 0 && bad == 0 && !over;
    failed += !ok;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << cr.id << ": " << cr.what << " (" << (n - bad) << "/" << n
              << " checks, " << ms << " ms";
    if (over) std::cout << ", over budget " << cr.budget_ms << " ms";
    if (bad) std::cout << ", first failure: " << first;
    std::cout << ")\n";
  }

  const bool same = strip_timing(rep[0]).dump() == strip_timing(rep[1]).dump();
  const bool ok10 = same && rc[0] == rc[1] && wall[0] < 1800000 && wall[1] < 1800000;
  failed += !ok10;
  std::cout << (ok10 ? "[PASS]" : "[FAIL]") << " criterion 10: two `verify all --q 3` runs give identical data sections ("
            << rep[0]["checks"].size() << " checks, exit codes " << rc[0] << "/" << rc[1] << ", wall " << wall[0] << "/" << wall[1]
            << " ms" << (same ? "" : ", reports differ") << ")\n";
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : std::string("acceptance: all criteria pass"))
            << "\n";
  return failed ? 1 : 0;
}
