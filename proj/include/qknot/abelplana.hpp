#pragma once

#include "qknot/cplx.hpp"
#include "qknot/rat.hpp"
#include "qknot/special.hpp"

namespace qk {

// Abel-Plana kernel H_kappa(u, v): the boundary-integral building block of the
// Taylor-error terms.  For v not an integer,
//   H = i * int_0^inf [ f(u - i t kappa) / (e(v)  e^{2 pi t} - 1)
//                     - f(u + i t kappa) / (e(-v) e^{2 pi t} - 1) ] dt,
// where f is the branch of log(1 - e(z)) fixed by log_one_minus_e.  For v an
// integer and 0 < Re u < 1 the two denominators merge and a boundary term
// appears:
//   H = -f(u)/2 + i * int_0^inf [ f(u - i t kappa) - f(u + i t kappa) ]
//                               / (e^{2 pi t} - 1) dt.
// At the corner (u, v) = (1, 0) the limit has the closed form
//   H = -log(kappa)/2 - pi i/4 + pi i kappa/12,
// which is what this routine returns there; (u, v) = (0, 0) is a pole and is
// rejected, as is any u whose distance to the nearest integer is positive but
// below 2^{-prec/4} (the integral is legal at exact integers, but a near-hit
// would need precision we refuse to spend silently).
struct KernelParams {
  Real kappa;             // in (0, 1]
  Cplx u;                 // Re u in [0, 1]
  Rat v;                  // exact, read mod 1
  mpfr_prec_t prec = 192; // absolute error <= 2^{-prec/2}
};

Cplx h_kernel(const KernelParams& params);

// int_0^inf Im( (-i t)^ell / (e(v) e^{2 pi t} - 1) ) dt.  Equals
// (-1)^ell * B~_{ell+1}(v) / (2 (ell+1)) with B~ the periodic Bernoulli
// polynomial; evaluated by quadrature here so tests can pin that identity
// independently.  Requires 0 <= ell, v in [0, 1).
Real b_integral(long ell, const Rat& v, mpfr_prec_t prec = 192);

// Parameters shared by the Taylor-error sums.  (p, pbar, q) come from a
// modular setup with p * pbar = 1 mod q; s is the residue class r mod q;
// lambda has Re in [0, 1); kappa = d/k in (0, 1].
struct ErrParams {
  long s = 0;
  Cplx lambda;
  Real kappa;
  long p = 0;
  long pbar = 0;
  long q = 1;
  mpfr_prec_t prec = 192;
};

// E_s(lambda, kappa): minus the g-sum of kernels,
//   -H_kappa((<p s> - lambda)/q, 0)
//   - sum_{g=1..q, g != <p s> mod q} H_kappa((g - lambda)/q, (g pbar - s)/q),
// with <n> the representative of n mod q in [1, q].  Terms accumulate in
// ascending g so results are bit-reproducible.
Cplx err_E(const ErrParams& params);

// Conjugate-side error term E*_s(lambda, kappa).  For lambda != 0,
//   E* = f((q - <p s> + lambda)/q) / 2
//      + sum_{g=1..q} i * int_0^inf [ f((q-g+lambda)/q - i t kappa) / (e(-v_g) e^{2 pi t} - 1)
//                                   - f((q-g+lambda)/q + i t kappa) / (e(v_g)  e^{2 pi t} - 1) ] dt
// with v_g = (g pbar - s)/q; at lambda = 0 it is conj(E_s(0, kappa)).
Cplx err_Estar(const ErrParams& params);

// Coefficients of the small-kappa expansion E_s(lambda, kappa) ~
// sum_ell (q kappa)^ell E_{s,ell}(lambda):
//   E_{s,0} = sum_g f((g - lambda)/q) B_1(<g pbar - s>/q),
//   E_{s,ell} = (-1)^ell / (q^ell (ell+1)!) *
//               sum_g f^(ell)((g - lambda)/q) B~_{ell+1}((g pbar - s)/q),
// and the starred variants with arguments (q - g + lambda)/q and without the
// (-1)^ell.  Requires Re lambda in (1/16, 15/16).
Cplx err_taylor(long s, long ell, const Cplx& lambda, long p, long pbar,
                long q, mpfr_prec_t prec = 192);
Cplx err_taylor_star(long s, long ell, const Cplx& lambda, long p, long pbar,
                     long q, mpfr_prec_t prec = 192);

// Evaluator for many E/E* values sharing one (kappa, precision) cell, as in a
// theorem-defect sweep over all r for one modular setup.  Caches the
// quadrature rule and per-node cosh/sinh(pi kappa t) tables across calls.
class ErrEvaluator {
 public:
  ErrEvaluator(long p, long pbar, long q, const Real& kappa, mpfr_prec_t prec);
  ~ErrEvaluator();
  ErrEvaluator(const ErrEvaluator&) = delete;
  ErrEvaluator& operator=(const ErrEvaluator&) = delete;

  // lambda must be real with value in [0, 1); exact as a Real at wp bits.
  Cplx value(long s, const Real& lambda) const;
  Cplx value_star(long s, const Real& lambda) const;

  mpfr_prec_t working_prec() const;

 private:
  struct Impl;
  Impl* impl_;
};

} // namespace qk
