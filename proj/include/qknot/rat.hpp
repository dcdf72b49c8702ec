#pragma once

#include <gmp.h>

#include <string>
#include <utility>
#include <vector>

#include "qknot/real.hpp"

namespace qk {

// Exact integer on GMP.
class Int {
 public:
  mpz_t z;

  Int() { mpz_init(z); }
  Int(long x) { mpz_init_set_si(z, x); }  // NOLINT: implicit by design
  Int(const Int& o) { mpz_init_set(z, o.z); }
  Int(Int&& o) noexcept {
    mpz_init(z);
    mpz_swap(z, o.z);
  }
  Int& operator=(const Int& o) {
    if (this != &o) mpz_set(z, o.z);
    return *this;
  }
  Int& operator=(Int&& o) noexcept {
    mpz_swap(z, o.z);
    return *this;
  }
  ~Int() { mpz_clear(z); }

  bool fits_long() const { return mpz_fits_slong_p(z) != 0; }
  long to_long() const {
    require(fits_long(), Status::Cap, "integer exceeds machine range");
    return mpz_get_si(z);
  }
  int sgn() const { return mpz_sgn(z); }
  std::string str() const {
    char* s = mpz_get_str(nullptr, 10, z);
    std::string out(s);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(s, out.size() + 1);
    return out;
  }
};

inline Int operator+(const Int& a, const Int& b) {
  Int r;
  mpz_add(r.z, a.z, b.z);
  return r;
}
inline Int operator-(const Int& a, const Int& b) {
  Int r;
  mpz_sub(r.z, a.z, b.z);
  return r;
}
inline Int operator*(const Int& a, const Int& b) {
  Int r;
  mpz_mul(r.z, a.z, b.z);
  return r;
}
inline bool operator==(const Int& a, const Int& b) { return mpz_cmp(a.z, b.z) == 0; }
inline bool operator<(const Int& a, const Int& b) { return mpz_cmp(a.z, b.z) < 0; }
inline bool operator<=(const Int& a, const Int& b) { return mpz_cmp(a.z, b.z) <= 0; }
inline Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.z, a.z, b.z);
  return r;
}
// Floor division.
inline Int fdiv(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_q(r.z, a.z, b.z);
  return r;
}
inline Int fmod(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_r(r.z, a.z, b.z);
  return r;
}

// Exact rational on GMP; always canonical (reduced, positive denominator).
class Rat {
 public:
  mpq_t q;

  Rat() { mpq_init(q); }
  Rat(long num, long den) {
    mpq_init(q);
    require(den != 0, Status::Invalid, "zero denominator");
    mpq_set_si(q, num, 1);
    mpq_t d;
    mpq_init(d);
    mpq_set_si(d, den, 1);
    mpq_div(q, q, d);
    mpq_clear(d);
  }
  Rat(long x) {  // NOLINT: implicit by design
    mpq_init(q);
    mpq_set_si(q, x, 1);
  }
  Rat(const Int& n, const Int& d) {
    mpq_init(q);
    require(mpz_sgn(d.z) != 0, Status::Invalid, "zero denominator");
    mpz_set(mpq_numref(q), n.z);
    mpz_set(mpq_denref(q), d.z);
    mpq_canonicalize(q);
  }
  Rat(const Rat& o) {
    mpq_init(q);
    mpq_set(q, o.q);
  }
  Rat(Rat&& o) noexcept {
    mpq_init(q);
    mpq_swap(q, o.q);
  }
  Rat& operator=(const Rat& o) {
    if (this != &o) mpq_set(q, o.q);
    return *this;
  }
  Rat& operator=(Rat&& o) noexcept {
    mpq_swap(q, o.q);
    return *this;
  }
  ~Rat() { mpq_clear(q); }

  Int num() const {
    Int r;
    mpz_set(r.z, mpq_numref(q));
    return r;
  }
  Int den() const {
    Int r;
    mpz_set(r.z, mpq_denref(q));
    return r;
  }
  long num_long() const { return num().to_long(); }
  long den_long() const { return den().to_long(); }
  int sgn() const { return mpq_sgn(q); }
  bool is_integer() const { return mpz_cmp_ui(mpq_denref(q), 1) == 0; }

  Int floor() const {
    Int r;
    mpz_fdiv_q(r.z, mpq_numref(q), mpq_denref(q));
    return r;
  }
  // Fractional part in [0,1).
  Rat frac() const;

  Real to_real(mpfr_prec_t prec) const {
    Real r(prec);
    mpfr_set_q(r.v, q, MPFR_RNDN);
    return r;
  }
  double to_double() const { return mpq_get_d(q); }

  std::string str() const;                     // "h/k" (or "n" when integral)
  static Rat parse(const std::string& text);   // accepts "h/k" and "n"
};

inline Rat operator+(const Rat& a, const Rat& b) {
  Rat r;
  mpq_add(r.q, a.q, b.q);
  return r;
}
inline Rat operator-(const Rat& a, const Rat& b) {
  Rat r;
  mpq_sub(r.q, a.q, b.q);
  return r;
}
inline Rat operator*(const Rat& a, const Rat& b) {
  Rat r;
  mpq_mul(r.q, a.q, b.q);
  return r;
}
inline Rat operator/(const Rat& a, const Rat& b) {
  require(mpq_sgn(b.q) != 0, Status::Invalid, "rational division by zero");
  Rat r;
  mpq_div(r.q, a.q, b.q);
  return r;
}
inline Rat operator-(const Rat& a) {
  Rat r;
  mpq_neg(r.q, a.q);
  return r;
}
inline bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.q, b.q) != 0; }
inline bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
inline bool operator<(const Rat& a, const Rat& b) { return mpq_cmp(a.q, b.q) < 0; }
inline bool operator<=(const Rat& a, const Rat& b) { return mpq_cmp(a.q, b.q) <= 0; }
inline bool operator>(const Rat& a, const Rat& b) { return mpq_cmp(a.q, b.q) > 0; }
inline bool operator>=(const Rat& a, const Rat& b) { return mpq_cmp(a.q, b.q) >= 0; }

// Reduced fraction used as a point of Q/Z or Q; alias for readability.
using Fraction = Rat;

// Canonical continued fraction [0; b1, ..., br] of a rational in [0,1),
// with br > 1 (uniqueness convention).
struct ContinuedFraction {
  std::vector<Int> b;        // partial quotients, b[0] = b1
  std::vector<Int> u, v;     // convergents u_s/v_s, s = 0..r (u0/v0 = 0/1)
  Int sigma;                 // sum of partial quotients
  long r() const { return static_cast<long>(b.size()); }
  std::string str() const;   // "[0;b1,b2,...]"
};

ContinuedFraction cf_expand(const Fraction& alpha);

// (Σ(α), r(α)) = (sum of partial quotients, their count).
std::pair<Int, long> sigma_r(const Fraction& alpha);

// Dedekind sum s(p,q) = Σ_{n=1}^{q-1} (n/q)((pn/q)), exact; ((x)) is the
// sawtooth {x} - 1/2 away from integers and 0 at integers.
Rat dedekind_sum(long p, long q);

// Inverse of a modulo m, in [1, m); requires gcd(a,m) = 1 (m >= 2).
long mod_inverse(long a, long m);

// Data of the modular move: gamma = (p, -qbar; q, pbar) with p*pbar + q*qbar = 1,
// applied to x = N/d; h = N p - d qbar, k = N q + d pbar, gamma x = h/k.
struct ModularSetup {
  long p, q, pbar, qbar, N, d;
  long h, k;
  Fraction x, gx;     // N/d and h/k
  Fraction kappa;     // d/k
};

ModularSetup modular_setup(long p, long q, long pbar, long qbar, long N, long d);

}  // namespace qk
