#pragma once

#include <vector>

#include "qknot/cplx.hpp"
#include "qknot/rat.hpp"

namespace qk {

// Working precision carrier for the whole stack (bits of mantissa).
struct Precision {
  long bits = 192;
};

// Exact Bernoulli number B_n (B_1 = -1/2), cached.
Rat bernoulli_number(long n);

// Bernoulli polynomial B_k(t), exact.
Rat bernoulli_poly(long k, const Rat& t);

// Periodized Bernoulli polynomial B_k({t}); the k = 1 case is the sawtooth,
// defined as 0 at integers.
Rat bernoulli_tilde(long k, const Rat& t);

// e(x) = exp(2*pi*i*x) with the angle reduced mod 1 exactly before sin/cos.
Cplx root_of_unity(const Fraction& x, mpfr_prec_t prec);

// log(2 sin(pi x)) for exact rational x with {x} in (0,1).
Real log_2sin_pi(const Rat& x, mpfr_prec_t prec);

// f(z) = log(1 - e(z)), the branch real on the positive imaginary axis;
// equals log(2 sin pi z) + i pi (z - 1/2) on the closed strip 0 <= Re z <= 1.
// Rejects real z outside (0,1) and Re z outside [0,1].
Cplx f_log1me(const Cplx& z);
Cplx f_log1me(const Rat& z, mpfr_prec_t prec);

// nu-th derivative of f, nu >= 1; 1-periodic, real for nu >= 2 on (0,1).
Cplx f_derivative(long nu, const Cplx& z);
Real f_derivative_real(long nu, const Real& x);  // nu >= 2 only

// Lobachevsky function: odd, 1-periodic, -integral of log|2 sin pi t|.
Real lobachevsky(const Real& lambda, mpfr_prec_t prec);
Real lobachevsky(const Rat& lambda, mpfr_prec_t prec);

// Values on the lattice j/n, j = 0..n-1 (for grid scans).
std::vector<Real> lobachevsky_lattice(long n, mpfr_prec_t prec);

// Lie(lambda) = integral_0^lambda f(1-t) dt - pi i/12 on {0 <= Re < 1};
// closed form on the real segment, straight-path quadrature off it.
Cplx lie(const Cplx& lambda, mpfr_prec_t prec);
Cplx lie(const Rat& lambda, mpfr_prec_t prec);

// (e(alpha))_r = prod_{i=1}^{r} (1 - e(alpha)^i), angles reduced exactly.
Cplx pochhammer(const Fraction& alpha, long r, mpfr_prec_t prec);

// Prefix table [(e(alpha))_0, ..., (e(alpha))_count]; needs count < den(alpha)
// so no factor vanishes beyond the full product.
std::vector<Cplx> pochhammer_prefix(const Fraction& alpha, long count, mpfr_prec_t prec);

// [alpha]_n = k^{-1/2} (e(alpha))_{n mod k}, k = den(alpha).
Cplx bracket(const Fraction& alpha, long n, mpfr_prec_t prec);

// c0(h/k) = -sum_{m=1}^{k-1} (m/k) cot(pi m h/k).
Real cotangent_sum_c0(long h, long k, mpfr_prec_t prec);

// max over 0 <= r' < h of |sum_{1<=n<=r'} cot(pi n kbar/h) (n/h)|, kbar = k^{-1} mod h.
Real cot_partial_max(long h, long k, mpfr_prec_t prec);

}  // namespace qk
