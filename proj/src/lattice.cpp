#include "hermlab/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace hermlab {

namespace {

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Z[w] arithmetic with w^{2f} = -sum g_i w^i.
struct ZW {
  std::vector<int64_t> g;
  EElem mul(const EElem& a, const EElem& b) const {
    const size_t n = a.size();
    std::vector<mpz_class> t(2 * n);
    for (size_t i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      for (size_t j = 0; j < n; ++j) t[i + j] += a[i] * b[j];
    }
    for (size_t k = 2 * n - 1; k >= n; --k) {
      if (t[k] == 0) continue;
      mpz_class top = t[k];
      t[k] = 0;
      for (size_t i = 0; i < n; ++i) t[k - n + i] -= top * static_cast<long>(g[i]);
    }
    return EElem(t.begin(), t.begin() + static_cast<long>(n));
  }
};

bool divide_exact(EElem& a, const mpz_class& d) {
  for (auto& c : a)
    if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) return false;
  for (auto& c : a) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
  return true;
}

HermMatrix integral_normalized(const HermMatrix& B) {
  HermMatrix Bn = B;
  Bn.normalize();
  if (Bn.denom_pow() > 0 || !Bn.is_integral()) throw std::runtime_error("no integral structure");
  return Bn;
}

// pi^e e_j in the column span of W for every j
bool contains_scaled_L(const std::vector<std::vector<EElem>>& W, const std::vector<int>& a, int e, long p, const ZW& zw) {
  const int k = static_cast<int>(a.size());
  const size_t deg = W[0][0].size();
  for (int j = 0; j < k; ++j) {
    std::vector<EElem> x(static_cast<size_t>(k), EElem(deg));
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e - a[static_cast<size_t>(j)]));
    x[static_cast<size_t>(j)][0] = pe;
    for (int i = j - 1; i >= 0; --i) {
      EElem num(deg);
      for (int l = i + 1; l <= j; ++l) {
        EElem t = zw.mul(W[static_cast<size_t>(i)][static_cast<size_t>(l)], x[static_cast<size_t>(l)]);
        for (size_t c = 0; c < deg; ++c) num[c] -= t[c];
      }
      mpz_class pa;
      mpz_ui_pow_ui(pa.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(a[static_cast<size_t>(i)]));
      if (!divide_exact(num, pa)) return false;
      x[static_cast<size_t>(i)] = std::move(num);
    }
  }
  return true;
}

}  // namespace

std::vector<Lattice> overlattices(const HermMatrix& B, bool integral_only, const OverlatticeOptions& opt) {
  const HermMatrix Bn = integral_normalized(B);
  const long p = Bn.p();
  const int f = Bn.f(), k = Bn.n(), deg = 2 * f;
  const int e = integral_only ? classify_type(Bn).max_part() : Bn.det_valuation();
  const int P = std::max({3 * e + 1, k * e + 1, 1});
  RingCtx R(p, f, P);
  const auto Bm = Bn.to_ring(R);
  ZW zw{R.defining_poly()};

  // off-diagonal positions (i, j), i < j
  std::vector<std::pair<int, int>> pos;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < j; ++i) pos.push_back({i, j});

  std::vector<Lattice> out;
  uint64_t seen = 0;
  std::vector<int> a(static_cast<size_t>(k), 0);
  while (true) {
    // residues of entry (i,j) mod pi^{a_i}: coefficient vectors in [0, p^{a_i})^{2f}
    std::vector<uint64_t> radix;
    uint64_t total = 1;
    for (auto [i, j] : pos) {
      uint64_t r = static_cast<uint64_t>(ipow(p, a[static_cast<size_t>(i)] * deg));
      radix.push_back(r);
      total *= r;
    }
    seen += total;
    if (seen > opt.cap) throw std::runtime_error("overlattice enumeration exceeds desk scale");
    std::vector<std::vector<EElem>> W(static_cast<size_t>(k), std::vector<EElem>(static_cast<size_t>(k), EElem(static_cast<size_t>(deg))));
    for (int i = 0; i < k; ++i) W[static_cast<size_t>(i)][static_cast<size_t>(i)][0] = mpz_class(ipow(p, a[static_cast<size_t>(i)]));
    for (uint64_t idx = 0; idx < total; ++idx) {
      uint64_t rest = idx;
      for (size_t s = 0; s < pos.size(); ++s) {
        uint64_t v = rest % radix[s];
        rest /= radix[s];
        const long m = ipow(p, a[static_cast<size_t>(pos[s].first)]);
        EElem& w = W[static_cast<size_t>(pos[s].first)][static_cast<size_t>(pos[s].second)];
        for (int c = 0; c < deg; ++c) {
          w[static_cast<size_t>(c)] = static_cast<long>(v % static_cast<uint64_t>(m));
          v /= static_cast<uint64_t>(m);
        }
      }
      if (!contains_scaled_L(W, a, e, p, zw)) continue;
      // G = W^* B W mod p^P
      std::vector<std::vector<RingElem>> Wr(static_cast<size_t>(k), std::vector<RingElem>(static_cast<size_t>(k), R.zero()));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          std::vector<long long> c;
          for (const auto& x : W[static_cast<size_t>(i)][static_cast<size_t>(j)]) c.push_back(x.get_si());
          Wr[static_cast<size_t>(i)][static_cast<size_t>(j)] = R.from_coeffs(c);
        }
      std::vector<std::vector<RingElem>> BW(static_cast<size_t>(k), std::vector<RingElem>(static_cast<size_t>(k), R.zero()));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          for (int l = 0; l < k; ++l)
            BW[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                R.add(BW[static_cast<size_t>(i)][static_cast<size_t>(j)],
                      R.mul(Bm[static_cast<size_t>(i)][static_cast<size_t>(l)], Wr[static_cast<size_t>(l)][static_cast<size_t>(j)]));
      std::vector<std::vector<RingElem>> G(static_cast<size_t>(k), std::vector<RingElem>(static_cast<size_t>(k), R.zero()));
      bool integral = true;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          RingElem s = R.zero();
          for (int l = 0; l < k; ++l)
            s = R.add(s, R.mul(R.conj(Wr[static_cast<size_t>(l)][static_cast<size_t>(i)]), BW[static_cast<size_t>(l)][static_cast<size_t>(j)]));
          G[static_cast<size_t>(i)][static_cast<size_t>(j)] = s;
          if (R.valuation(s) < 2 * e) integral = false;
        }
      if (integral_only && !integral) continue;
      Lattice L;
      L.k = k;
      L.e = e;
      L.a = a;
      L.W = W;
      L.integral = integral;
      L.inv.ell = k * e;
      for (int x : a) L.inv.ell -= x;
      if (integral) {
        const int D = P - 2 * e;
        RingCtx R2(p, f, D);
        std::vector<std::vector<RingElem>> G2(static_cast<size_t>(k), std::vector<RingElem>(static_cast<size_t>(k), R2.zero()));
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) {
            RingElem s = R.div_p(G[static_cast<size_t>(i)][static_cast<size_t>(j)], 2 * e);
            std::vector<long long> c(s.c.begin(), s.c.begin() + deg);
            G2[static_cast<size_t>(i)][static_cast<size_t>(j)] = R2.from_coeffs(c);
          }
        L.gram = HermMatrix::from_ring(R2, G2, 0);
        L.inv.type = Partition(type_mod(R2, G2, D));
        L.inv.t = L.inv.type.t();
        L.inv.val = L.inv.type.val();
      } else {
        L.gram = HermMatrix::from_ring(R, G, 2 * e);
      }
      out.push_back(std::move(L));
    }
    // next diagonal exponent vector
    int s = 0;
    while (s < k && a[static_cast<size_t>(s)] == e) a[static_cast<size_t>(s++)] = 0;
    if (s == k) break;
    ++a[static_cast<size_t>(s)];
  }
  return out;
}

std::map<Partition, long> type_counts(const HermMatrix& B, const OverlatticeOptions& opt) {
  std::map<Partition, long> m;
  for (const auto& L : overlattices(B, true, opt)) ++m[L.inv.type];
  return m;
}

long count_by_type(const HermMatrix& B, const Partition& lam, const OverlatticeOptions& opt) {
  auto m = type_counts(B, opt);
  auto it = m.find(lam);
  return it == m.end() ? 0 : it->second;
}

XPolynomial cho_yamauchi_series(const HermMatrix& B, const OverlatticeOptions& opt) {
  QField Q = QField::concrete(ipow(B.p(), B.f()));
  XPolynomial r;
  for (const auto& L : overlattices(B, true, opt))
    r = r + XPolynomial::monomial(ExactScalar(1), static_cast<size_t>(2 * L.inv.ell)) * m_poly(Q, L.inv.t);
  return r;
}

FuncEqResult check_functional_equation(const HermMatrix& B, const OverlatticeOptions& opt) {
  FuncEqResult res;
  const int v = B.det_valuation();
  XPolynomial R = cho_yamauchi_series(B, opt);
  if (R.degree() > v) {
    res.report = "degree " + std::to_string(R.degree()) + " exceeds val " + std::to_string(v);
    return res;
  }
  for (int i = 0; i <= v; ++i) {
    ExactScalar lhs = R.coeff(static_cast<size_t>(i));
    ExactScalar rhs = R.coeff(static_cast<size_t>(v - i));
    if (v % 2 != 0) rhs = -rhs;
    if (lhs != rhs) {
      res.report = "X^" + std::to_string(i) + ": " + lhs.str() + " vs " + rhs.str();
      return res;
    }
  }
  res.ok = true;
  return res;
}

ExactScalar derivative_sum_C(const HermMatrix& B, const CZeroConfig& cfg, const OverlatticeOptions& opt) {
  QField Q = QField::concrete(ipow(B.p(), B.f()));
  ExactScalar s;
  for (const auto& [lam, cnt] : type_counts(B, opt)) s += C_const(lam, Q, cfg) * ExactScalar(cnt);
  return s;
}

IntersectionResult intersection_number(const HermMatrix& B, int n, const IntersectionOptions& opt) {
  const HermMatrix Bn = integral_normalized(B);
  if (Bn.n() != 2 * n) throw std::invalid_argument("intersection_number: B must be 2n x 2n");
  QField Q = QField::concrete(ipow(Bn.p(), Bn.f()));
  auto counts = type_counts(Bn, opt.lattice);
  IntersectionResult res;
  for (const auto& [lam, cnt] : counts) {
    IntersectionTerm t;
    t.kind = "D";
    t.lam = lam;
    t.coeff = D_const(lam, n, Q, opt.cz);
    t.count = cnt;
    res.terms.push_back(t);
  }
  for (int i = 0; i < n; ++i) {
    std::vector<int> parts(static_cast<size_t>(2 * n), 0);
    for (int j = 0; j < i; ++j) parts[static_cast<size_t>(j)] = 1;
    IntersectionTerm t;
    t.kind = "b";
    t.lam = Partition(parts);
    t.coeff = -frakb0(i, n, Q).defining;
    auto it = counts.find(t.lam);
    t.count = it == counts.end() ? 0 : it->second;
    res.terms.push_back(t);
  }
  res.density_complete = opt.density_form;
  res.agree = true;
  for (auto& t : res.terms) {
    res.value += t.coeff * ExactScalar(t.count);
    if (!opt.density_form) continue;
    try {
      HermMatrix A = gram_of_partition(t.lam, Bn.p(), Bn.f());
      t.density_ratio = alpha(A, Bn, opt.density) / self_density(t.lam, Q);
      t.density_evaluated = true;
      res.density_value += t.coeff * t.density_ratio;
      if (t.density_ratio != ExactScalar(t.count)) res.agree = false;
    } catch (const std::runtime_error&) {
      res.density_complete = false;
    }
  }
  if (!opt.density_form) res.agree = false;
  return res;
}

HermMatrix divide_last_by_pi(const HermMatrix& B) {
  HermMatrix r = B;
  const int k = r.n(), c = r.denom_pow();
  r.rescale_denominator(c + 2);
  const mpz_class pp(B.p());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      int drop = (i == k - 1) + (j == k - 1);
      if (!drop) continue;
      EElem x = r.num(i, j);
      mpz_class d = drop == 2 ? pp * pp : pp;
      for (auto& v : x) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
      r.set_num(i, j, x);
    }
  r.normalize();
  return r;
}

CountIdentityResult n1_remark_check(const HermMatrix& B, const OverlatticeOptions& opt) {
  const HermMatrix Bn = integral_normalized(B);
  if (Bn.n() != 2 || Bn.block(1, 1, 1, 1).min_entry_valuation() < 2)
    throw std::invalid_argument("n1_remark_check: need a 2x2 Gram with val h(y,y) >= 2");
  if (Bn.det_valuation() % 2 != 0) throw std::invalid_argument("n1_remark_check: val det B must be even");
  const long q = ipow(Bn.p(), Bn.f());
  const HermMatrix B2 = divide_last_by_pi(Bn);
  auto cx = type_counts(Bn, opt);
  std::map<Partition, long> cy;
  if (B2.is_integral() && B2.denom_pow() == 0) cy = type_counts(B2, opt);
  auto weight = [&](const Partition& l) -> ExactScalar {
    if (l[0] == 1 && l[1] == 1) return ExactScalar(-(q - 1));
    if (l[1] >= 2) return ExactScalar(-(q * q - 1));
    if (l[0] >= 2 && l[1] <= 1) return ExactScalar(1);
    return ExactScalar(0);
  };
  CountIdentityResult r;
  std::map<Partition, long> all = cx;
  for (const auto& [l, c] : cy) all[l] += 0;
  for (const auto& [l, unused] : all) {
    long d = (cx.count(l) ? cx[l] : 0) - (cy.count(l) ? cy[l] : 0);
    r.long_form += weight(l) * ExactScalar(d);
  }
  long c11 = cx.count(Partition({1, 1})) ? cx[Partition({1, 1})] : 0;
  long c00 = cy.count(Partition({0, 0})) ? cy[Partition({0, 0})] : 0;
  r.short_form = ExactScalar(-q * c11 + c00);
  r.ok = r.long_form == r.short_form;
  return r;
}

}  // namespace hermlab
