#pragma once

#include "qknot/cplx.hpp"
#include "qknot/rat.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace qk {

// Static description of one knot's state-sum: the m summation variables, the
// counts m_1..m_4 of bracket factors of each kind (plain, conjugated,
// inverted, conjugate-inverted), and the linear forms ell_{i,j}(r) =
// sum_u c_u r_u with coefficients in {-1, 0, 1}.  iota = (3 - m)/2 is the
// half-integer power of k in front of the sum; nu is the phase exponent used
// by the modularity-side constant checks.
struct KnotPreset {
  struct Slot {
    int kind;              // 0..3 for the four bracket kinds
    std::array<int, 4> c;  // coefficients of r_1..r_m (trailing zeros)
  };

  std::string name;
  int m = 1;
  std::array<int, 4> mi{};
  int nu = 0;
  std::vector<Slot> slots;  // grouped by kind ascending, j order within kind

  long cap() const;  // largest allowed denominator for kashaev_eval

  // Complex-seed table for the critical-point solve; empty means "scan a
  // real grid for the seed".
  std::vector<Cplx> seed(mpfr_prec_t prec) const;
};

// Lookup by name ("4_1" .. "7_7"); throws Status::Invalid on unknown names.
const KnotPreset& knot_preset(const std::string& name);
const std::vector<std::string>& knot_names();

// Kashaev invariant at e(x): k^iota * sum*_{0 <= r_i < k} of the bracket
// product, where sum* keeps only terms with every ell_{i,j}(r) in [0, k).
// Brackets come from one prefix table of (e(x))_n, so the cost is O(k)
// setup plus O(k^m) table products.  Deterministic for any thread count:
// the r_1 range is cut into fixed-size blocks whose partial sums combine in
// ascending block order.
Cplx kashaev_eval(const KnotPreset& K, const Fraction& x, mpfr_prec_t prec,
                  int threads = 1);

// The figure-eight special form sum_{r=0}^{k-1} |(e(h/k))_r|^2, used by the
// statistics scans; real and >= 1, and equal to kashaev_eval(4_1, h/k).
Real kashaev_41(const Fraction& q_arg, mpfr_prec_t prec);

// V-hat(n): the sum of shifted dilogarithm integrals
//   sum_{j<=m1} (Lie(l_1j) + pi i/12) - sum_{j<=m2} (Lie(1-l_2j) + pi i/12)
// - sum_{j<=m3} (Lie(l_3j) + pi i/12) + sum_{j<=m4} (Lie(1-l_4j) + pi i/12),
// defined while every ell_{i,j}(n) stays in the strip 0 < Re < 1.
Cplx potential(const KnotPreset& K, const std::vector<Cplx>& n);

// Gradient d V-hat / d n_u and Hessian d^2 V-hat / d n_u d n_w.
std::vector<Cplx> potential_gradient(const KnotPreset& K,
                                     const std::vector<Cplx>& n);
std::vector<std::vector<Cplx>> potential_hessian(const KnotPreset& K,
                                                 const std::vector<Cplx>& n);

// Real-grid envelope W_K(lambda) = -sum_{i<=2} Lob(ell) + sum_{i>=3} Lob(ell)
// maximized over grid points of step 1/g in [0,1)^m at which some
// ell_{i,j}(lambda) falls outside [0,1).  For knots whose forms always stay
// in [0,1) the region is empty: sup is -inf and region_nonempty is false.
struct WBoundResult {
  Real sup;
  bool region_nonempty = false;
  std::vector<Rat> certificate;
};
WBoundResult w_bound_check(const KnotPreset& K, const Rat& grid_step);

// Critical point of V-hat: Newton iteration on grad V-hat = 0 from the given
// seed, stopping at residual < 2^{-prec/2}.  Fails after 64 steps or if an
// iterate leaves the strip.  hess_det is det(-Hessian) at the solution.
struct SaddleState {
  std::vector<Cplx> mu;
  Cplx value;
  Cplx hess_det;
};
SaddleState solve_critical(const KnotPreset& K, const std::vector<Cplx>& seed,
                           mpfr_prec_t prec);

// (Vol, CS) = (2 pi Re V-hat(mu), -2 pi Im V-hat(mu)) at the knot's critical
// point, seeded from the preset table or a real-grid scan.
std::pair<Real, Real> vol_cs(const KnotPreset& K, mpfr_prec_t prec);

} // namespace qk
