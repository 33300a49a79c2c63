// hermlab: densities, constants, verification suites and intersection numbers.
// Exit codes: 0 all checks pass, 1 a check or computation failed, 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "hermlab/verify.hpp"
#include "json.hpp"

using namespace hermlab;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

int to_int(const std::string& s) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("not an integer: " + s);
  }
  if (pos != s.size()) throw UsageError("not an integer: " + s);
  return v;
}

// identity:k | diag:p^a,p^b,... | At:t[,n] | json:<path>
HermMatrix parse_matrix(const std::string& spec, long p, int f) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("matrix spec needs a kind: " + spec);
  const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
  if (kind == "identity") return HermMatrix::identity(p, f, to_int(arg));
  if (kind == "diag") {
    std::vector<int> e;
    for (const auto& t : split(arg, ',')) {
      auto caret = t.find('^');
      if (caret == std::string::npos) {
        if (t != "1" && t != "p" && t != "pi") throw UsageError("diag entry must be p^a: " + t);
        e.push_back(t == "1" ? 0 : 1);
      } else {
        const std::string base = t.substr(0, caret);
        if (base != "p" && base != "pi") throw UsageError("diag entry must be p^a: " + t);
        e.push_back(to_int(t.substr(caret + 1)));
      }
    }
    if (e.empty()) throw UsageError("empty diag");
    return HermMatrix::diag(p, f, e);
  }
  if (kind == "At") {
    auto v = split(arg, ',');
    if (v.empty() || v.size() > 2) throw UsageError("At:t[,n]");
    int t = to_int(v[0]), n = v.size() == 2 ? to_int(v[1]) : t;
    if (t < 0 || t > 2 * n) throw UsageError("At needs 0 <= t <= 2n");
    return a_t_matrix(t, n, p, f);
  }
  if (kind == "json") {
    std::ifstream in(arg);
    if (!in) throw UsageError("cannot read " + arg);
    json j;
    try {
      in >> j;
      return HermMatrix::from_json(j, p, f);
    } catch (const json::exception& e) {
      throw UsageError(std::string("malformed matrix JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("malformed matrix JSON: ") + e.what());
    }
  }
  throw UsageError("unknown matrix kind: " + kind);
}

struct Common {
  long q = 0;  // 0: symbolic where allowed
  std::string cache;
  int jobs = 1;
  uint64_t state_cap = uint64_t(1) << 28;
  std::unique_ptr<CountCache> cache_obj;

  DensityOptions density() {
    DensityOptions o;
    o.jobs = jobs;
    o.state_cap = state_cap;
    if (cache.empty())
      if (const char* env = std::getenv("HERMLAB_CACHE")) cache = env;
    if (!cache.empty()) {
      if (!cache_obj) cache_obj = std::make_unique<CountCache>(cache + "/counts.jsonl");
      o.cache = cache_obj.get();
    }
    return o;
  }
  json cache_meta() const {
    if (!cache_obj) return nullptr;
    return {{"path", cache_obj->path()}, {"hits", cache_obj->hits()}, {"misses", cache_obj->misses()}};
  }
  std::pair<long, int> pf() const {
    if (q == 0) throw UsageError("this command requires --q");
    try {
      return split_prime_power(q);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

void add_common(CLI::App* sub, Common& c, bool need_q) {
  auto* opt = sub->add_option("--q", c.q, need_q ? "residue field size (odd prime power)" : "concrete q; symbolic when omitted");
  if (need_q) opt->default_val(3);
  sub->add_option("--cache", c.cache, "count cache directory (default $HERMLAB_CACHE)");
  sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--state-cap", c.state_cap, "enumeration cap per counting step");
}

// ---------------------------------------------------------------- density

struct DensityArgs {
  std::string A, B;
  std::vector<std::string> W;
  int r = 0;
  bool series = false, prime = false;
  std::string format = "text";
};

int cmd_density(DensityArgs& a, Common& c) {
  auto [p, f] = c.pf();
  DensityOptions opt = c.density();
  if (a.B.empty()) throw UsageError("--B is required");
  HermMatrix B = parse_matrix(a.B, p, f);
  json out;
  out["q"] = c.q;
  out["B"] = a.B;
  if (!a.W.empty()) {
    int h = -1, t = -1;
    for (const auto& tok : a.W)
      for (const auto& kv : split(tok, ',')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--W expects h=<int> t=<int>");
        const std::string key = kv.substr(0, eq);
        if (key != "h" && key != "t") throw UsageError("--W key " + kv);
        (key == "h" ? h : t) = to_int(kv.substr(eq + 1));
      }
    if (h < 0 || t < 0) throw UsageError("--W needs both h and t");
    if (B.n() % 2 != 0) throw UsageError("--W needs an even-size B");
    out["W"] = {{"h", h}, {"t", t}};
    if (a.series)
      out["series"] = weighted_W_series(h, t, B, -1, opt).str();
    else if (a.prime)
      out["derivative"] = weighted_W_prime(h, t, B, -1, opt).str();
    else {
      out["r"] = a.r;
      out["value"] = weighted_W(h, t, B, a.r, opt).str();
    }
  } else {
    if (a.A.empty()) throw UsageError("--A is required without --W");
    HermMatrix A = parse_matrix(a.A, p, f);
    out["A"] = a.A;
    if (a.series) {
      out["series"] = alpha_series(A, B, -1, opt).str();
    } else if (a.prime) {
      out["derivative"] = alpha_prime(A, B, -1, opt).str();
    } else {
      CountResult cr = stabilized_count(A, B, {}, opt);
      out["value"] = alpha(A, B, opt).str();
      out["stabilization"] = {{"precision", cr.d}, {"denominator_shift", cr.c}, {"raw_count", cr.raw.get_str()},
                              {"start_precision", start_precision(A, B)}, {"stabilized", cr.stabilized}};
    }
  }
  if (c.cache_obj) out["cache"] = c.cache_meta();
  if (a.format == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    for (const char* k : {"value", "series", "derivative"})
      if (out.contains(k)) std::cout << out[k].get<std::string>() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- constants

struct ConstArgs {
  bool C = false, D = false, K = false, beta = false, delta = false, b = false, d = false, A = false;
  int n = 1, h = -1, max_part = 2;
  std::string format = "table";
};

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void print_table(const std::vector<ConstRow>& rows) {
  size_t w0 = 4, w1 = 7, w2 = 6;
  for (const auto& r : rows) {
    w0 = std::max(w0, r.name.size());
    w1 = std::max(w1, r.indices.size());
    w2 = std::max(w2, r.qmode.size());
  }
  auto line = [&](const std::string& a, const std::string& b, const std::string& c, const std::string& d) {
    std::cout << std::left << std::setw(static_cast<int>(w0) + 2) << a << std::setw(static_cast<int>(w1) + 2) << b
              << std::setw(static_cast<int>(w2) + 2) << c << d << "\n";
  };
  line("name", "indices", "q-mode", "value");
  for (const auto& r : rows) line(r.name, r.indices, r.qmode, r.value.str());
}

int cmd_constants(ConstArgs& a, Common& c) {
  const QField Q = c.q ? QField::concrete(c.q) : QField::symbolic();
  if (c.q) c.pf();
  const std::string mode = Q.tag();
  CZeroConfig cz;
  cz.density = c.density();
  if (a.n < 1) throw UsageError("--n must be >= 1");
  if (!(a.C || a.D || a.K || a.beta || a.delta || a.b || a.d || a.A)) a.D = true;
  std::vector<ConstRow> rows;
  if (a.C)
    for (const auto& lam : partitions_range(a.n, 0, a.max_part)) rows.push_back({"C", join_ints(lam.parts()), mode, C_const(lam, Q, cz)});
  if (a.D)
    for (const auto& lam : partitions_range(2 * a.n, 0, a.max_part))
      rows.push_back({"D", join_ints(lam.parts()), mode, D_const(lam, a.n, Q, cz)});
  if (a.K) {
    Vector K = K_consts(a.n, Q);
    for (size_t l = 0; l < K.size(); ++l) rows.push_back({"K", std::to_string(l), mode, K[l]});
  }
  if (a.d) {
    KDSystem S = kd_system(a.n, Q);
    for (int l = 0; l <= 2 * a.n; ++l)
      for (int i = 0; i <= l; ++i)
        rows.push_back({"d", std::to_string(i) + "," + std::to_string(l), mode, S.Delta[static_cast<size_t>(i)][static_cast<size_t>(l)]});
  }
  if (a.A) {
    Matrix A = A_table(a.n, Q);
    for (size_t j = 0; j < A.size(); ++j)
      for (size_t l = 0; l < A.size(); ++l) rows.push_back({"A", std::to_string(j) + "," + std::to_string(l), mode, A[j][l]});
  }
  if (a.beta || a.delta) {
    std::vector<int> hs;
    if (a.h >= 0)
      hs.push_back(a.h);
    else
      for (int h = 0; h <= a.n; ++h) hs.push_back(h);
    for (int h : hs) {
      if (h > a.n) throw UsageError("--h must be in [0, n]");
      BetaSystem S = beta_consts(a.n, h, Q);
      const std::string hn = "h=" + std::to_string(h);
      if (a.beta)
        for (int i = 0; i < 2 * a.n; ++i) {
          rows.push_back({"beta_solver", hn + " i=" + std::to_string(i), mode, S.solution[static_cast<size_t>(i)]});
          rows.push_back({"beta_closed", hn + " i=" + std::to_string(i), mode, S.closed[static_cast<size_t>(i)]});
        }
      if (a.delta) rows.push_back({"delta", hn, mode, S.delta()});
    }
  }
  if (a.b)
    for (int i = 0; i < a.n; ++i) {
      FrakB fb = frakb0(i, a.n, Q);
      rows.push_back({"b0_defining", std::to_string(i), mode, fb.defining});
      rows.push_back({"b0_expanded", std::to_string(i), mode, fb.expanded});
    }
  if (a.format == "csv")
    std::cout << rows_to_csv(rows);
  else if (a.format == "json")
    std::cout << rows_to_json(rows).dump(2) << "\n";
  else
    print_table(rows);
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite;
  std::string out;
  std::string format = "json";
  bool no_timing = false;
};

int cmd_verify(VerifyArgs& a, Common& c) {
  if (!is_suite(a.suite)) throw UsageError("unknown suite: " + a.suite);
  c.pf();
  VerifyConfig cfg;
  cfg.q = c.q;
  cfg.density = c.density();
  cfg.cz.density = cfg.density;
  auto checks = run_suite(a.suite, cfg);
  json rep = report_json(checks, !a.no_timing);
  json meta = {{"suite", a.suite}, {"q", c.q}};
  if (c.cache_obj) meta["cache"] = c.cache_meta();
  rep["meta"] = meta;
  std::string text;
  if (a.format == "json") {
    text = rep.dump(2) + "\n";
  } else {
    std::ostringstream os;
    for (const auto& ch : checks)
      os << (ch.pass ? "PASS " : "FAIL ") << ch.name << " [" << ch.instance << "] " << ch.lhs << " | " << ch.rhs << "\n";
    os << rep["summary"]["pass"] << " passed, " << rep["summary"]["fail"] << " failed\n";
    text = os.str();
  }
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream o(a.out);
    if (!o) throw UsageError("cannot write " + a.out);
    o << text;
    std::cout << rep["summary"].dump() << "\n";
  }
  return rep["summary"]["fail"].get<long>() == 0 ? 0 : 1;
}

// ---------------------------------------------------------------- intersection

struct InterArgs {
  std::string B;
  int n = 1;
  bool no_density = false;
};

int cmd_intersection(InterArgs& a, Common& c) {
  auto [p, f] = c.pf();
  if (a.B.empty()) throw UsageError("--B is required");
  HermMatrix B = parse_matrix(a.B, p, f);
  IntersectionOptions io;
  io.density_form = !a.no_density;
  io.density = c.density();
  io.cz.density = io.density;
  IntersectionResult r;
  try {
    r = intersection_number(B, a.n, io);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::runtime_error& e) {
    if (std::string(e.what()) == "no integral structure") throw UsageError(e.what());
    throw;
  }
  json terms = json::array();
  for (const auto& t : r.terms) {
    json j = {{"kind", t.kind}, {"lambda", t.lam.str()}, {"coeff", t.coeff.str()}, {"count", t.count}};
    j["density_ratio"] = t.density_evaluated ? json(t.density_ratio.str()) : json(nullptr);
    terms.push_back(j);
  }
  json out = {{"q", c.q},
              {"n", a.n},
              {"B", a.B},
              {"value", r.value.str()},
              {"density_value", io.density_form ? json(r.density_value.str()) : json(nullptr)},
              {"density_complete", r.density_complete},
              {"agreement", r.agree},
              {"terms", terms}};
  if (c.cache_obj) out["cache"] = c.cache_meta();
  std::cout << out.dump(2) << "\n";
  return io.density_form && !r.agree ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hermlab: exact hermitian local densities and lattice counts"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  Common cden, ccon, cver, cint;  // separate so --q defaults do not leak

  DensityArgs da;
  auto* den = app.add_subcommand("density", "alpha(A,B), its series and derivative, or W_{h,t}(B,r)");
  add_common(den, cden, true);
  den->add_option("--A", da.A, "representing matrix");
  den->add_option("--B", da.B, "represented matrix");
  den->add_option("--W", da.W, "weighted density: h=<int> t=<int>")->expected(1, 2);
  den->add_option("--r", da.r, "r for W_{h,t}(B,r)");
  den->add_flag("--series", da.series, "polynomial in X");
  den->add_flag("--prime", da.prime, "derivative at X = 1");
  den->add_option("--format", da.format)->check(CLI::IsMember({"text", "json"}));

  ConstArgs ca;
  auto* con = app.add_subcommand("constants", "tabulate C, D, K, beta, delta, b, d, A");
  con->set_help_flag("--help", "print help");  // -h is --h here
  add_common(con, ccon, false);
  con->add_flag("--C", ca.C);
  con->add_flag("--D", ca.D);
  con->add_flag("--K", ca.K);
  con->add_flag("--beta", ca.beta);
  con->add_flag("--delta", ca.delta);
  con->add_flag("--b", ca.b);
  con->add_flag("--d", ca.d);
  con->add_flag("--A", ca.A);
  con->add_option("--n", ca.n);
  con->add_option("--h", ca.h);
  con->add_option("--max-part", ca.max_part, "largest part for C and D rows");
  con->add_option("--format", ca.format)->check(CLI::IsMember({"table", "csv", "json"}));

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  add_common(ver, cver, true);
  ver->add_option("suite", va.suite, "consts|f0|density-oracle|lattice-oracle|cy|funceq|thm47|conj49|remark-n1|all")->required();
  ver->add_option("--out", va.out, "write the report here");
  ver->add_option("--format", va.format)->check(CLI::IsMember({"json", "table"}));
  ver->add_flag("--no-timing", va.no_timing, "omit per-check ms");

  InterArgs ia;
  auto* inter = app.add_subcommand("intersection", "evaluate the conjectural intersection formula");
  add_common(inter, cint, true);
  inter->add_option("--B", ia.B, "Gram matrix of size 2n")->required();
  inter->add_option("--n", ia.n);
  inter->add_flag("--no-density", ia.no_density, "lattice form only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (*den) return cmd_density(da, cden);
    if (*con) return cmd_constants(ca, ccon);
    if (*ver) return cmd_verify(va, cver);
    if (*inter) return cmd_intersection(ia, cint);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    // symbolic mode cannot brute-force; that is a usage error
    return std::string(e.what()).find("requires concrete q") != std::string::npos ? 2 : 1;
  }
  return 2;
}
