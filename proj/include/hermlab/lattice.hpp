#pragma once
// Overlattices L' of L = O_E^k with Gram B, counted by Jordan type, and the
// lattice side of the series, functional equation and intersection formulas.

#include <map>
#include <string>
#include <vector>

#include "hermlab/closedform.hpp"
#include "hermlab/density.hpp"
#include "hermlab/herm.hpp"

namespace hermlab {

struct LatticeInvariants {
  Partition type;  // Jordan type of the Gram of L'
  int t = 0;       // nonzero parts
  int val = 0;     // sum of parts
  int ell = 0;     // length of L'/L
};

// L' has basis pi^{-e} W (columns, L-coordinates).  W is upper triangular
// with diagonal pi^{a_i} and entry (i,j) reduced mod pi^{a_i}.
struct Lattice {
  int k = 0;
  int e = 0;
  std::vector<int> a;
  std::vector<std::vector<EElem>> W;
  HermMatrix gram;  // exact numerators mod pi^{precision}; classifies L'
  bool integral = false;
  LatticeInvariants inv;  // type only meaningful when integral
};

struct OverlatticeOptions {
  uint64_t cap = 20000000;  // HNF candidates
};

// All L' with L in L' and L' in pi^{-N} L, N = val det B.  With integral_only,
// the search uses the tighter bound L' in L^dual in pi^{-e} L, e = max part of the type of B.
std::vector<Lattice> overlattices(const HermMatrix& B, bool integral_only, const OverlatticeOptions& opt = {});
// type -> number of integral overlattices of that type
std::map<Partition, long> type_counts(const HermMatrix& B, const OverlatticeOptions& opt = {});
long count_by_type(const HermMatrix& B, const Partition& lam, const OverlatticeOptions& opt = {});

XPolynomial cho_yamauchi_series(const HermMatrix& B, const OverlatticeOptions& opt = {});

struct FuncEqResult {
  bool ok = false;
  std::string report;  // first mismatching coefficient
};
FuncEqResult check_functional_equation(const HermMatrix& B, const OverlatticeOptions& opt = {});

// sum over realized types of C_lam * count
ExactScalar derivative_sum_C(const HermMatrix& B, const CZeroConfig& cfg = {}, const OverlatticeOptions& opt = {});

struct IntersectionTerm {
  std::string kind;  // "D" or "b"
  Partition lam;
  ExactScalar coeff;
  long count = 0;
  bool density_evaluated = false;
  ExactScalar density_ratio;  // alpha(A_lam,B)/alpha(A_lam,A_lam)
};

struct IntersectionResult {
  ExactScalar value;          // lattice form
  ExactScalar density_value;  // density form over the evaluated terms
  bool density_complete = false;
  bool agree = false;         // every evaluated density ratio equals its count
  std::vector<IntersectionTerm> terms;
};

struct IntersectionOptions {
  bool density_form = true;
  CZeroConfig cz;
  DensityOptions density;
  OverlatticeOptions lattice;
};

IntersectionResult intersection_number(const HermMatrix& B, int n, const IntersectionOptions& opt = {});

struct CountIdentityResult {
  ExactScalar long_form;
  ExactScalar short_form;
  bool ok = false;
};
// B = Gram of (x, y) with val h(y,y) >= 2.
CountIdentityResult n1_remark_check(const HermMatrix& B, const OverlatticeOptions& opt = {});

// Gram of (x_1, ..., x_{k-1}, x_k / pi)
HermMatrix divide_last_by_pi(const HermMatrix& B);

}  // namespace hermlab
