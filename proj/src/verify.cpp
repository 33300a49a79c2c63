#include "hermlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <stdexcept>

namespace hermlab {

std::pair<long, int> split_prime_power(long q) {
  if (q < 3) throw std::invalid_argument("q must be a power of an odd prime");
  long p = q;
  for (long d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  int f = 0;
  long r = q;
  while (r % p == 0) {
    r /= p;
    ++f;
  }
  if (r != 1 || p == 2) throw std::invalid_argument("q must be a power of an odd prime");
  return {p, f};
}

std::string vec_str(const Vector& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s + ")";
}

namespace {

using Clock = std::chrono::steady_clock;

struct Suite {
  std::vector<Check>& out;
  std::string name;

  // body returns {lhs, rhs}; pass iff equal, unless it sets the flag itself
  void run(const std::string& name, const std::string& anchor, const std::string& instance,
           const std::function<std::pair<std::string, std::string>()>& body) {
    Check c{this->name, name, anchor, instance, "", "", false, 0};
    auto t0 = Clock::now();
    try {
      auto [l, r] = body();
      c.lhs = l;
      c.rhs = r;
      c.pass = l == r;
    } catch (const std::exception& e) {
      c.lhs = std::string("error: ") + e.what();
      c.rhs = "-";
    }
    c.ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    out.push_back(c);
  }
  void run_bool(const std::string& name, const std::string& anchor, const std::string& instance,
                const std::function<std::pair<bool, std::string>()>& body) {
    run(name, anchor, instance, [&]() -> std::pair<std::string, std::string> {
      auto [ok, detail] = body();
      return {ok ? "true" : "false: " + detail, "true"};
    });
  }
};

std::string diag_name(const std::vector<int>& e) {
  std::string s = "diag(";
  for (size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::string("pi^") + std::to_string(e[i]);
  return s + ")";
}

struct Ctx {
  long q, p;
  int f;
  QField Q;
  explicit Ctx(long qq) : q(qq), Q(QField::concrete(qq)) {
    auto pf = split_prime_power(qq);
    p = pf.first;
    f = pf.second;
  }
  HermMatrix diag(const std::vector<int>& e) const { return HermMatrix::diag(p, f, e); }
  HermMatrix id(int k) const { return HermMatrix::identity(p, f, k); }
  // [[pi, 1 + w], [1 + w^sigma, pi]] for f = 1, where w^sigma = -g_1 - w; [[pi, 1], [1, pi^2]] otherwise
  HermMatrix nondiag() const {
    HermMatrix H(p, f, 2);
    EElem a(static_cast<size_t>(2 * f)), b(static_cast<size_t>(2 * f)), bc(static_cast<size_t>(2 * f)), d(a);
    a[0] = p;
    d[0] = f == 1 ? p : p * p;
    b[0] = 1;
    bc[0] = 1;
    if (f == 1) {
      const long g1 = static_cast<long>(RingCtx(p, f, 1).defining_poly()[1]);
      b[1] = 1;
      bc[0] = 1 - g1;
      bc[1] = -1;
    }
    H.set_num(0, 0, a);
    H.set_num(1, 1, d);
    H.set_num(0, 1, b);
    H.set_num(1, 0, bc);
    return H;
  }
};

std::vector<std::pair<std::string, HermMatrix>> rank12_corpus(const Ctx& c, bool with_nondiag) {
  std::vector<std::pair<std::string, HermMatrix>> v;
  for (int a = 0; a <= 3; ++a) v.push_back({diag_name({a}), c.diag({a})});
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= a; ++b) v.push_back({diag_name({a, b}), c.diag({a, b})});
  if (with_nondiag) v.push_back({"[[pi,1+w],[1+w',pi]]", c.nondiag()});
  return v;
}

void suite_consts(Suite& s, const VerifyConfig&) {
  const QField S = QField::symbolic();
  for (int n = 1; n <= 4; ++n)
    for (int h = 0; h <= n; ++h) {
      const std::string inst = "n=" + std::to_string(n) + " h=" + std::to_string(h);
      s.run("beta solver vs closed form", "beta system closed form", inst, [&]() -> std::pair<std::string, std::string> {
        BetaSystem B = beta_consts(n, h, S);
        Vector a(B.solution.begin(), B.solution.begin() + 2 * n);
        return {vec_str(a), vec_str(B.closed)};
      });
      s.run_bool("beta factorization", "frak B = frak X a_h", inst, [&]() -> std::pair<bool, std::string> {
        return {beta_consts(n, h, S).factorization_ok, "mismatch"};
      });
    }
  for (int n = 1; n <= 4; ++n)
    for (int l = 0; l <= 2 * n; ++l) {
      const std::string inst = "n=" + std::to_string(n) + " l=" + std::to_string(l);
      s.run("d closed form vs M_l solve", "d_il", inst, [&]() -> std::pair<std::string, std::string> {
        KDSystem K = kd_system(n, S);
        Vector e(static_cast<size_t>(l) + 1);
        e.back() = ExactScalar(1);
        Vector closed;
        for (int i = 0; i <= l; ++i) closed.push_back(d_closed(i, l, n, S));
        return {vec_str(closed), vec_str(solve_linear(K.M[static_cast<size_t>(l)], e))};
      });
    }
  for (int n = 1; n <= 4; ++n) {
    const std::string inst = "n=" + std::to_string(n);
    s.run("K recurrence vs Delta solve", "K_l", inst, [&]() -> std::pair<std::string, std::string> {
      KDSystem K = kd_system(n, S);
      const int L = 2 * n;
      Vector rhs(static_cast<size_t>(L) + 1);
      rhs[0] = -S.negq_pow(-2L * n * n);
      rhs[static_cast<size_t>(n)] = S.negq_pow(-4L * n * n);
      // kd_system's K comes from the product recurrence and is checked against A K
      return {vec_str(K.K), vec_str(solve_linear(K.Delta, rhs))};
    });
    s.run_bool("K support", "K_0 = 0 and K_l = 0 for l > n", inst, [&]() -> std::pair<bool, std::string> {
      Vector K = K_consts(n, S);
      bool ok = K[0].is_zero();
      for (int l = n + 1; l <= 2 * n; ++l) ok = ok && K[static_cast<size_t>(l)].is_zero();
      return {ok, vec_str(K)};
    });
    s.run_bool("A triangular with unit diagonal", "A_jl", inst, [&]() -> std::pair<bool, std::string> {
      Matrix A = A_table(n, S);
      for (size_t j = 0; j < A.size(); ++j)
        for (size_t l = 0; l < A.size(); ++l) {
          if (j < l && !A[j][l].is_zero()) return {false, "A[" + std::to_string(j) + "][" + std::to_string(l) + "]"};
          if (j == l && !A[j][l].is_one()) return {false, "A[" + std::to_string(j) + "][" + std::to_string(l) + "]"};
        }
      return {true, ""};
    });
  }
  for (int k = 1; k <= 12; ++k)
    s.run("telescoping sum", "K_l telescoping identity", "k=" + std::to_string(k),
          [&]() -> std::pair<std::string, std::string> { return {telescoping_sum(k, S).str(), "1"}; });

  // six-row table of D_lambda at n = 1
  for (long qq : {3L, 5L, 7L}) {
    const QField Q = QField::concrete(qq);
    const ExactScalar q(qq), one(1);
    struct Row {
      std::vector<int> lam;
      ExactScalar want;
    };
    std::vector<Row> rows = {
        {{3, 2}, q * q - one},             // E0 = E1 = 0, odd sum: -(-1)^{sum}(q^2-1)
        {{2, 2}, -(q * q - one)},          // E0 = E1 = 0, even sum
        {{3, 1}, one},                     // E1 = 1, even sum: (-1)^{sum}
        {{2, 1}, -one},                    // E1 = 1, odd sum
        {{3, 0}, -one},                    // E0 = 1, E1 = 0: (-1)^{sum}
        {{2, 0}, one},
        {{1, 1}, -(q - one)},
        {{1, 0}, -(q + ExactScalar(2)) / (q + one)},
        {{0, 0}, one / (q + one)},
    };
    for (const auto& r : rows)
      s.run("D table n=1", "D_lambda, n = 1 table", "q=" + std::to_string(qq) + " lam=" + Partition(r.lam).str(),
            [&]() -> std::pair<std::string, std::string> { return {D_const(Partition(r.lam), 1, Q).str(), r.want.str()}; });
  }
  s.run("D(0,0) symbolic", "D_lambda, n = 1 table", "symbolic",
        [&]() -> std::pair<std::string, std::string> {
          return {D_const(Partition({0, 0}), 1, S).str(), (ExactScalar(1) / (S.q() + ExactScalar(1))).str()};
        });
}

void suite_f0(Suite& s, const VerifyConfig& cfg) {
  const QField S = QField::symbolic();
  const Ctx c(cfg.q);
  auto fails = [](int n) { return std::to_string(n) + " failures"; };
  s.run("A_jl relation on F0", "sum_i d_il F0(Y, A_{lam+i}) = A_{E0(Y),l} F0(Y, A_lam)", "n=1 symbolic, Y in [-4,4], parts <= 4",
        [&]() -> std::pair<std::string, std::string> {
          std::string why;
          int k = check_eq415(1, S, 4, &why);
          return {fails(k) + (k ? " " + why : ""), fails(0)};
        });
  s.run("A_jl relation on F0", "sum_i d_il F0(Y, A_{lam+i}) = A_{E0(Y),l} F0(Y, A_lam)",
        "n=2 q=" + std::to_string(c.q) + ", Y in [-4,4], parts <= 4", [&]() -> std::pair<std::string, std::string> {
          std::string why;
          int k = check_eq415(2, c.Q, 4, &why);
          return {fails(k) + (k ? " " + why : ""), fails(0)};
        });
  s.run("derivative expansion of F0", "F0'(Y,A_n) - F0'(Y,A_0) stripped = f(Y) sum K_l lambda-sums", "n=1 symbolic, Y in [-4,4]",
        [&]() -> std::pair<std::string, std::string> {
          std::string why;
          int k = check_eq418(1, S, 4, cfg.cz, &why);
          return {fails(k) + (k ? " " + why : ""), fails(0)};
        });
  s.run("derivative expansion of F0", "F0'(Y,A_n) - F0'(Y,A_0) stripped = f(Y) sum K_l lambda-sums",
        "n=2 q=" + std::to_string(c.q) + ", Y in [-4,4]", [&]() -> std::pair<std::string, std::string> {
          std::string why;
          int k = check_eq418(2, c.Q, 4, cfg.cz, &why);
          return {fails(k) + (k ? " " + why : ""), fails(0)};
        });
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= 3; ++k) {
      long b = 1;
      for (int i = 1; i <= n; ++i) b = b * (n + k - i + 1) / i;
      if (b > 20) continue;
      const std::string inst = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " q=" + std::to_string(c.q);
      s.run_bool("F0 matrix invertible", "linear independence of F0(Y,A_alpha)", inst, [&]() -> std::pair<bool, std::string> {
        return {!determinant(lin_indep_matrix(n, k, c.Q)).is_zero(), "singular"};
      });
      s.run_bool("F0 matrix block factorization", "linear independence of F0(Y,A_alpha)", inst,
                 [&]() -> std::pair<bool, std::string> {
                   BlockCheck bc = lin_indep_block_check(n, k, c.Q);
                   return {bc.stripped_ok && bc.full_ok, bc.stripped_ok ? "full" : "stripped"};
                 });
    }
}

void suite_density(Suite& s, const VerifyConfig& cfg) {
  std::vector<long> qs = {cfg.q};
  if (cfg.q != 5) qs.push_back(5);
  for (size_t qi = 0; qi < qs.size(); ++qi) {
    const Ctx c(qs[qi]);
    const ExactScalar q(c.q), one(1);
    const std::string qn = "q=" + std::to_string(c.q);
    s.run("alpha(1_1,1_1)", "(q+1)/q", qn, [&]() -> std::pair<std::string, std::string> {
      return {alpha(c.id(1), c.id(1), cfg.density).str(), ((q + one) / q).str()};
    });
    for (int k = 1; k <= 4; ++k)
      s.run("alpha(pi^k,pi^k)", "q^{k-1}(q+1)", qn + " k=" + std::to_string(k), [&]() -> std::pair<std::string, std::string> {
        return {alpha(c.diag({k}), c.diag({k}), cfg.density).str(), (c.Q.q_pow(k - 1) * (q + one)).str()};
      });
    s.run("W_{1,1}(A_1,0)", "(q+1)^2/q^5", qn, [&]() -> std::pair<std::string, std::string> {
      return {weighted_W(1, 1, a_t_matrix(1, 1, c.p, c.f), 0, cfg.density).str(), ((q + one) * (q + one) / c.Q.q_pow(5)).str()};
    });
    if (qi > 0) continue;  // rank-2 instances at the main q only
    s.run("alpha(1_2,1_2)", "(q+1)(q^2-1)/q^3", qn, [&]() -> std::pair<std::string, std::string> {
      return {alpha(c.id(2), c.id(2), cfg.density).str(), ((q + one) * (q * q - one) / c.Q.q_pow(3)).str()};
    });
    for (int n = 1; n <= 2; ++n) {
      if (n == 2 && c.q > 3) continue;  // beyond desk scale
      s.run("W_{n,n}(A_n,0)", "q^{-3n^2} prod_{l<=n} (1-(-q)^{-l})^2", qn + " n=" + std::to_string(n),
            [&]() -> std::pair<std::string, std::string> {
              return {weighted_W(n, n, a_t_matrix(n, n, c.p, c.f), 0, cfg.density).str(), W_nn_closed(n, c.Q).str()};
            });
    }
    s.run("alpha'(1_1,1_1)/alpha(1_1,1_1)", "-1/(q+1)", qn, [&]() -> std::pair<std::string, std::string> {
      return {(alpha_prime(c.id(1), c.id(1), -1, cfg.density) / alpha(c.id(1), c.id(1), cfg.density)).str(),
              (-one / (q + one)).str()};
    });
    s.run("alpha'(1_2,1_2)/alpha(1_2,1_2)", "-(q-2)/(q^2-1)", qn, [&]() -> std::pair<std::string, std::string> {
      return {(alpha_prime(c.id(2), c.id(2), -1, cfg.density) / alpha(c.id(2), c.id(2), cfg.density)).str(),
              (-(q - ExactScalar(2)) / (q * q - one)).str()};
    });
  }
}

void suite_lattice_oracle(Suite& s, const VerifyConfig& cfg) {
  const Ctx c(cfg.q);
  auto corpus = rank12_corpus(c, true);
  corpus.push_back({diag_name({1, 1, 0}), c.diag({1, 1, 0})});
  for (const auto& [name, B] : corpus) {
    std::map<Partition, long> counts;
    try {
      counts = type_counts(B, cfg.lattice);
    } catch (const std::exception& e) {
      s.run("count vs density ratio", "count * alpha(A,A) = alpha(A,B)", name,
            [&]() -> std::pair<std::string, std::string> { throw std::runtime_error(e.what()); });
      continue;
    }
    for (const auto& [lam, cnt] : counts)
      s.run("count vs density ratio", "count * alpha(A,A) = alpha(A,B)", name + " lam=" + lam.str(),
            [&]() -> std::pair<std::string, std::string> {
              HermMatrix A = gram_of_partition(lam, c.p, c.f);
              return {(ExactScalar(cnt) * self_density(lam, c.Q)).str(), alpha(A, B, cfg.density).str()};
            });
  }
}

void suite_cy(Suite& s, const VerifyConfig& cfg) {
  const Ctx c(cfg.q);
  for (const auto& [name, B] : rank12_corpus(c, true))
    s.run("overlattice series", "alpha(1,B;X) = alpha(1,1;X) sum X^{2l} m(t;X)", name,
          [&]() -> std::pair<std::string, std::string> {
            HermMatrix I = c.id(B.n());
            XPolynomial cy = cho_yamauchi_series(B, cfg.lattice);
            return {alpha_series(I, B, -1, cfg.density).str(), (alpha_series(I, I, -1, cfg.density) * cy).str()};
          });
}

void suite_funceq(Suite& s, const VerifyConfig& cfg) {
  const Ctx c(cfg.q);
  for (const auto& [name, B] : rank12_corpus(c, true)) {
    if (B.det_valuation() % 2 != 0) continue;
    s.run_bool("functional equation", "R(X) = (-X)^{val} R(1/X)", name, [&]() -> std::pair<bool, std::string> {
      auto r = check_functional_equation(B, cfg.lattice);
      return {r.ok, r.report};
    });
  }
}

std::vector<std::pair<std::string, HermMatrix>> n1_corpus(const Ctx& c) {
  return {{diag_name({1, 1}), c.diag({1, 1})}, {diag_name({2, 0}), c.diag({2, 0})}, {diag_name({2, 2}), c.diag({2, 2})},
          {diag_name({3, 1}), c.diag({3, 1})}, {diag_name({1, 0}), c.diag({1, 0})}, {diag_name({2, 1}), c.diag({2, 1})},
          {diag_name({3, 0}), c.diag({3, 0})}, {"[[pi,1+w],[1+w',pi]]", c.nondiag()}};
}

void suite_weighted_derivative(Suite& s, const VerifyConfig& cfg) {
  const Ctx c(cfg.q);
  auto corpus = n1_corpus(c);
  corpus.resize(3);
  for (const auto& [name, B] : corpus)
    s.run("weighted density derivative", "W'_{0,1}(B,0)/W_{1,1}(A_1,0) = sum D_lam count", name,
          [&]() -> std::pair<std::string, std::string> {
            ExactScalar lhs = weighted_W_prime(0, 1, B, -1, cfg.density) /
                              weighted_W(1, 1, a_t_matrix(1, 1, c.p, c.f), 0, cfg.density);
            ExactScalar rhs;
            for (const auto& [lam, cnt] : type_counts(B, cfg.lattice)) rhs += D_const(lam, 1, c.Q, cfg.cz) * ExactScalar(cnt);
            return {lhs.str(), rhs.str()};
          });
}

void suite_intersection(Suite& s, const VerifyConfig& cfg) {
  const Ctx c(cfg.q);
  IntersectionOptions io;
  io.cz = cfg.cz;
  io.density = cfg.density;
  io.lattice = cfg.lattice;
  for (const auto& [name, B] : n1_corpus(c)) {
    IntersectionResult r;
    bool have = false;
    s.run_bool("both forms evaluated", "density form complete", name, [&]() -> std::pair<bool, std::string> {
      r = intersection_number(B, 1, io);
      have = true;
      return {r.density_complete, "some terms beyond desk scale"};
    });
    if (!have) continue;
    s.run("lattice form vs density form", "sum D alpha/alpha - sum b alpha/alpha", name,
          [&]() -> std::pair<std::string, std::string> { return {r.value.str(), r.density_value.str()}; });
    for (const auto& t : r.terms)
      s.run("term ratio vs count", "alpha(A_lam,B)/alpha(A_lam,A_lam) = #lattices", name + " " + t.kind + " lam=" + t.lam.str(),
            [&]() -> std::pair<std::string, std::string> {
              return {t.density_evaluated ? t.density_ratio.str() : "not evaluated", ExactScalar(t.count).str()};
            });
    if (B.det_valuation() % 2 != 0)
      s.run_bool("parity vanishing", "even-sum terms vanish for odd val det B", name, [&]() -> std::pair<bool, std::string> {
        for (const auto& t : r.terms)
          if (t.lam.val() % 2 == 0 && (t.count != 0 || !t.density_ratio.is_zero())) return {false, t.lam.str()};
        return {true, ""};
      });
  }
}

void suite_count_identity(Suite& s, const VerifyConfig& cfg) {
  const Ctx c(cfg.q);
  for (auto e : {std::vector<int>{0, 2}, {1, 3}, {2, 2}})
    s.run("n=1 lattice-count identity", "long difference = -q #A_(1,1)(x,y) + #A_(0,0)(x,y/pi)", diag_name(e),
          [&]() -> std::pair<std::string, std::string> {
            auto r = n1_remark_check(c.diag(e), cfg.lattice);
            return {r.long_form.str(), r.short_form.str()};
          });
}

using SuiteFn = void (*)(Suite&, const VerifyConfig&);
const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"consts", suite_consts},       {"f0", suite_f0},         {"density-oracle", suite_density},
      {"lattice-oracle", suite_lattice_oracle}, {"cy", suite_cy}, {"funceq", suite_funceq},
      {"thm47", suite_weighted_derivative},         {"conj49", suite_intersection}, {"remark-n1", suite_count_identity},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> v = [] {
    std::vector<std::string> r;
    for (const auto& [n, f] : registry()) r.push_back(n);
    return r;
  }();
  return v;
}

bool is_suite(const std::string& name) {
  const auto& v = suite_names();
  return name == "all" || std::find(v.begin(), v.end(), name) != v.end();
}

std::vector<Check> run_suite(const std::string& name, const VerifyConfig& cfg) {
  if (!is_suite(name)) throw std::invalid_argument("unknown suite: " + name);
  split_prime_power(cfg.q);
  std::vector<Check> out;
  for (const auto& [n, fn] : registry())
    if (name == "all" || name == n) {
      Suite s{out, n};
      fn(s, cfg);
    }
  return out;
}

nlohmann::json report_json(const std::vector<Check>& checks, bool timing) {
  nlohmann::json arr = nlohmann::json::array();
  long pass = 0, fail = 0;
  for (const auto& c : checks) {
    nlohmann::json j;
    j["suite"] = c.suite;
    j["name"] = c.name;
    j["anchor"] = c.anchor;
    j["instance"] = c.instance;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["pass"] = c.pass;
    if (timing) j["ms"] = c.ms;
    arr.push_back(j);
    (c.pass ? pass : fail)++;
  }
  nlohmann::json r;
  r["checks"] = arr;
  r["summary"] = {{"pass", pass}, {"fail", fail}};
  return r;
}

}  // namespace hermlab
