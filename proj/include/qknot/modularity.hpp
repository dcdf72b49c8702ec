#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qknot/cplx.hpp"
#include "qknot/knots.hpp"
#include "qknot/rat.hpp"

namespace qk {

// One row of the first reciprocity verification: both sides of
//   (e[gx])_r e[gx/24] / ((e[x])_L e[x/24])
//     = exp(pi i (p+pbar)/(12q) - pi i s(p,q) - pi i/4 + log(k/d)/2
//           + (k/(qd)) Lie(lambda) + E_s(lambda, d/k)),
// with L = floor(r d / k), lambda = {r d / k}, and E_s the Abel-Plana error
// term at residue class s = r - pbar L mod q (the boundary kernel sees the
// summation index shifted by pbar per completed window of length k/d).
// defect = |lhs/rhs - 1|.
struct IrReport {
  ModularSetup setup;
  long r = 0;
  long L = 0;
  Rat lambda;
  Cplx lhs, rhs;
  Real defect;
};

IrReport verify_ir(const ModularSetup& setup, long r, mpfr_prec_t prec);

// All rows 1 <= r < k for one setup, sharing the Pochhammer prefix tables and
// the kernel evaluator across rows.
std::vector<IrReport> verify_ir_all(const ModularSetup& setup,
                                    mpfr_prec_t prec);

// Defect |lhs/rhs - 1| of the exact finite-product identity
//   (e[-hbar/k])_r = (e[kbar/h])_{r0} h^{floor(r/h)} P M L,
//   P = prod_{n <= floor(r/h)} (1 - e[-n/k]),
//   M = prod_{n <= r, h does not divide n} (1 + e[-n/(hk)])/2,
//   L = prod_{n <= r, h does not divide n} (1 - cot(pi n kbar/h) tan(pi n/(hk))),
// where r0 = r mod h.  Requires 4 <= h < k coprime, 0 <= r < k.
Real verify_thp_decomposition(long h, long k, long r, mpfr_prec_t prec);

// Defects for every r in [0, k), built incrementally in O(k) products.
std::vector<Real> verify_thp_all(long h, long k, mpfr_prec_t prec);

// Residual of the main-term expansion of the same quotient:
//   | log LHS - (k/h) Lie(r/k)
//     + (pi/k) sum_{n <= r0} cot(pi n kbar / h) (n/h)
//     - (pi/k) floor(r/h) c0(kbar/h) |,
// with log LHS assembled branch-safely as a sum of principal logs of the
// individual Pochhammer factors.  Requires 4 <= h < k coprime, 1 <= r < k.
Real thp_main_terms(long h, long k, long r, mpfr_prec_t prec);

// Second reciprocity gap for the simplest knot:
//   H = log J(e(hbar/k)) - log J(e(kbar/h)) - (Vol/2pi)(k/h),
// returned together with the bound envelope
//   cot_partial_max(h,k)/k + |c0(kbar/h)|/h + log(k/h) + k/h^2.
std::pair<Real, Real> reciprocity_H(long h, long k, mpfr_prec_t prec);

// Residual of log|J(e(hbar/k))| - log|J(e(kbar/h))| + (2 pi / h) c0(kbar/h),
// divided by the envelope k/h + cot_partial_max(h,k)/k.  Requires
// c0(kbar/h) < 0.
Real th4_check(long h, long k, mpfr_prec_t prec);

// Asymptotic-constant extraction along x = N/den, N in samples:
//   Q(x) = [J(gx)/J(x)] (hbar/2pi)^{3/2} exp(-i(Vol - i CS)/hbar),
//   hbar = 2 pi i / (x - ginv_inf),
// Richardson-extrapolated in 1/N to the constant term C D_0.
struct AsymptoticFit {
  std::string knot;
  long a = 0, b = 0, c = 1, d = 0;  // gamma = (a, b; c, d), det 1
  long den = 1;                     // sample denominator
  std::vector<long> samples;        // numerators N
  std::vector<Cplx> q_values;       // Q(N/den) per sample
  Rat exponent = Rat(3, 2);         // prefactor exponent in (hbar/2pi)^e
  Cplx extracted;
  Cplx reference;                   // closed form when one exists
  bool has_reference = false;
};

AsymptoticFit extract_constant(const KnotPreset& K, long a, long b, long c,
                               long d, long den,
                               const std::vector<long>& n_list,
                               mpfr_prec_t prec);

// Closed-form constant term C_K(alpha) D_{K,0}(alpha) for the two knots where
// a finite-product expression is available (4_1 and 5_2); principal branches
// throughout, so the result may differ from extract_constant by an 8c-th
// root of unity.
Cplx closed_form_CD(const std::string& knot, const Fraction& alpha,
                    mpfr_prec_t prec);

// Congruence sum C(s) = sum_{i,j} sum_{g=1..q}
//   B_1(<g pbar - ell_{i,j}(s)>/q) psi_i((g - ell_{i,j}(mu))/q),
// with <n> the representative in [1, q] and psi_i the gradient branch of
// slot kind i.
Cplx congruence_sum(const KnotPreset& K, const std::vector<long>& s, long p,
                    long q, const std::vector<Cplx>& mu, mpfr_prec_t prec);

}  // namespace qk
