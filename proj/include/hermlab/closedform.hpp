#pragma once
// Explicit constants and finite formulas: m(a;X), C_lambda, self-densities,
// the beta system, d_il, K_l, the A_jl table, D_lambda, frak b_i^0, the F_0
// closed forms and the linear-independence matrices.

#include <string>
#include <vector>

#include "hermlab/density.hpp"
#include "hermlab/exact.hpp"
#include "hermlab/herm.hpp"
#include "json.hpp"

namespace hermlab {

// prod_{l=lo}^{hi} (1 - (-q)^{-l}); empty products are 1.
ExactScalar prod_one_minus_inv(const QField& Q, int lo, int hi);
// prod_{i=1}^{t-1} (1 - (-q)^i)
ExactScalar c_product(const QField& Q, int t);

XPolynomial m_poly(const QField& Q, int a);
ExactScalar m_deriv(const QField& Q, int a);  // -d/dX m(a;X) at X = 1

// Where C_{(0^k)} = alpha'(1_k,1_k)/alpha(1_k,1_k) comes from.
struct CZeroConfig {
  bool allow_density = true;  // concrete q only
  DensityOptions density;
};
// Built-in table first, then a memoized density computation.
ExactScalar C_zero(int k, const QField& Q, const CZeroConfig& cfg = {});
bool C_zero_cached(int k, const QField& Q);
// Independent path: solve the C-expansion of F_0'(Y,1_k) at Y = 1_k for the
// zero coefficient, using only the nonzero C_lambda.
ExactScalar C_zero_series(int k, const QField& Q);

ExactScalar C_const(const Partition& lam, const QField& Q, const CZeroConfig& cfg = {});

// blocks (a_j, k_j) with a_1 > a_2 > ... > a_t
ExactScalar self_density_diag(const std::vector<std::pair<int, int>>& blocks, const QField& Q);
// alpha(A_lam, A_lam) for a nonnegative partition
ExactScalar self_density(const Partition& lam, const QField& Q);
// q^{-3n^2} (prod_{l=1}^n (1 - (-q)^{-l}))^2
ExactScalar W_nn_closed(int n, const QField& Q);

struct BetaSystem {
  int n = 0, h = 0;
  Matrix frakB, frakX, a_h;
  Vector rhs;       // (-q)^{-2n(2n-h)} (-(2n-h), ..., h)
  Vector solution;  // (beta_0^h..beta_{n-1}^h, -beta_0^{2n-h}.., delta_h)
  Vector closed;    // closed form for the first 2n entries
  bool factorization_ok = false;
  ExactScalar beta(int i) const { return solution[static_cast<size_t>(i)]; }
  ExactScalar delta() const { return solution.back(); }
};
BetaSystem beta_consts(int n, int h, const QField& Q);

// d_{il}, 0 <= i <= l, closed form; cross-checked against M_l d = e_l.
ExactScalar d_closed(int i, int l, int n, const QField& Q);
Vector d_coeffs(int l, int n, const QField& Q);

struct KDSystem {
  int n = 0;
  std::vector<Matrix> M, X, delta;  // M_l, X_l, delta_l for 0 <= l <= 2n
  Matrix Delta;                      // upper triangular, Delta[i][l] = d_il
  Vector K;                          // K_0..K_{2n}
  Matrix A;                          // A[j][l]
};
KDSystem kd_system(int n, const QField& Q);
Vector K_consts(int n, const QField& Q);
Matrix A_table(int n, const QField& Q);
// sum_{j=1}^k (-1)^{j-1} prod_{m=1}^j ((-q)^{-m+1} - (-q)^{-k}) / (1 - (-q)^{-m})
ExactScalar telescoping_sum(int k, const QField& Q);

// D_lambda for lambda with 2n parts: the closed formula and the raw
// coefficient extraction through K, d and self-densities.
ExactScalar D_const(const Partition& lam, int n, const QField& Q, const CZeroConfig& cfg = {});
ExactScalar D_const_raw(const Partition& lam, int n, const QField& Q, const CZeroConfig& cfg = {});

struct FrakB {
  ExactScalar defining;  // (-q)^{-4in} beta_i^0 alpha(A,A) / W_{n,n}(A_n,0)
  ExactScalar expanded;  // base (-q) display
  bool agree = false;
};
FrakB frakb0(int i, int n, const QField& Q);

// F_0 closed forms.  n = number of exponents of Y.
int B_stat(int k, const YClass& Y);
int B_pair(const Partition& alpha, const Partition& eta);
ExactScalar f_weight(const YClass& Y, const QField& Q);
ExactScalar F0_closed(const YClass& Y, const Partition& lam, const QField& Q);
// through the eta statistics, for Y of class eta
ExactScalar F0_eta(const Partition& eta, const Partition& alpha, const QField& Q);
// derivative closed forms for Y of size 2n
ExactScalar F0p_An(const YClass& Y, int n, const QField& Q);
ExactScalar F0p_A0(const YClass& Y, const QField& Q);

// sum over lam in R_N^{0+} of C_lam alpha(1_N,1_N)/alpha(A_lam,A_lam) (-q)^{B_lam(Y)}, exact.
ExactScalar lambda_sum(int N, const YClass& Y, const QField& Q, const CZeroConfig& cfg = {});

// (F_0(Y_eta, A_alpha)) over eta, alpha in R_n^{0k}, lexicographic order.
Matrix lin_indep_matrix(int n, int k, const QField& Q);
// Block factorization over R_n^{0k} minus R_n^{0(k-1)}:
// stripped (no f(Y)) matrix == (-q)^k X^t M' X, and with f(Y):
// full matrix == (-q)^{k(1-n)} M' X.
struct BlockCheck {
  bool stripped_ok = false;
  bool full_ok = false;
};
BlockCheck lin_indep_block_check(int n, int k, const QField& Q);

// Function identities, returning the number of failing (lambda, Y) pairs.
int check_eq415(int n, const QField& Q, int max_part, std::string* first_failure = nullptr);
int check_eq418(int n, const QField& Q, int e_bound, const CZeroConfig& cfg = {},
                std::string* first_failure = nullptr);

// Table export.
struct ConstRow {
  std::string name;
  std::string indices;
  std::string qmode;
  ExactScalar value;
};
std::string rows_to_csv(const std::vector<ConstRow>& rows);
nlohmann::json rows_to_json(const std::vector<ConstRow>& rows);

}  // namespace hermlab
