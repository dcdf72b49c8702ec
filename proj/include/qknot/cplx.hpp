#pragma once

#include <string>

#include "qknot/real.hpp"

namespace qk {

// Complex number over two Reals. Same promotion rule as Real: operations
// round at the max of the operand precisions.
struct Cplx {
  Real re, im;

  explicit Cplx(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
  Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  mpfr_prec_t prec() const { return std::max(re.prec(), im.prec()); }

  static Cplx of_real(const Real& r) { return Cplx(r, Real(r.prec())); }
  static Cplx of_long(long x, mpfr_prec_t prec) {
    return Cplx(Real::of_long(x, prec), Real(prec));
  }
  bool is_finite() const { return re.is_finite() && im.is_finite(); }

  std::string json(long bits_field = -1) const;  // {"re":…, "im":…, "bits":n}
};

inline Cplx operator+(const Cplx& a, const Cplx& b) { return Cplx(a.re + b.re, a.im + b.im); }
inline Cplx operator-(const Cplx& a, const Cplx& b) { return Cplx(a.re - b.re, a.im - b.im); }
inline Cplx operator-(const Cplx& a) { return Cplx(-a.re, -a.im); }
inline Cplx conj(const Cplx& a) { return Cplx(a.re, -a.im); }

inline Cplx operator*(const Cplx& a, const Cplx& b) {
  mpfr_prec_t p = std::max(a.prec(), b.prec());
  Cplx r(p);
  Real t(p);
  mpfr_mul(r.re.v, a.re.v, b.re.v, MPFR_RNDN);
  mpfr_mul(t.v, a.im.v, b.im.v, MPFR_RNDN);
  mpfr_sub(r.re.v, r.re.v, t.v, MPFR_RNDN);
  mpfr_mul(r.im.v, a.re.v, b.im.v, MPFR_RNDN);
  mpfr_mul(t.v, a.im.v, b.re.v, MPFR_RNDN);
  mpfr_add(r.im.v, r.im.v, t.v, MPFR_RNDN);
  return r;
}
inline Cplx operator*(const Cplx& a, const Real& b) { return Cplx(a.re * b, a.im * b); }
inline Cplx operator*(const Real& b, const Cplx& a) { return a * b; }
inline Cplx operator*(const Cplx& a, long b) { return Cplx(a.re * b, a.im * b); }

inline Real abs2(const Cplx& a) { return sqr(a.re) + sqr(a.im); }
inline Real abs(const Cplx& a) { return hypot(a.re, a.im); }
inline Real arg(const Cplx& a) { return atan2(a.im, a.re); }

inline Cplx recip(const Cplx& a) {
  Real d = abs2(a);
  return Cplx(a.re / d, -(a.im / d));
}
inline Cplx operator/(const Cplx& a, const Cplx& b) {
  Real d = abs2(b);
  Cplx n = a * conj(b);
  return Cplx(n.re / d, n.im / d);
}
inline Cplx operator/(const Cplx& a, const Real& b) { return Cplx(a.re / b, a.im / b); }

inline Cplx& operator+=(Cplx& a, const Cplx& b) {
  a.re += b.re;
  a.im += b.im;
  return a;
}
inline Cplx& operator-=(Cplx& a, const Cplx& b) {
  a.re -= b.re;
  a.im -= b.im;
  return a;
}
inline Cplx& operator*=(Cplx& a, const Cplx& b) {
  a = a * b;
  return a;
}
inline Cplx& operator*=(Cplx& a, const Real& b) {
  a.re *= b;
  a.im *= b;
  return a;
}

inline Cplx cexp(const Cplx& z) {
  mpfr_prec_t p = z.prec();
  Real m = exp(z.re), s(p), c(p);
  sin_cos(s, c, z.im);
  return Cplx(m * c, m * s);
}

// Principal logarithm.
inline Cplx clog(const Cplx& z) { return Cplx(log(abs(z)), arg(z)); }

// sin(x+iy) = sin x cosh y + i cos x sinh y.
inline Cplx csin(const Cplx& z) {
  mpfr_prec_t p = z.prec();
  Real s(p), c(p), sh(p), ch(p);
  sin_cos(s, c, z.re);
  sinh_cosh(sh, ch, z.im);
  return Cplx(s * ch, c * sh);
}

// cos(x+iy) = cos x cosh y - i sin x sinh y.
inline Cplx ccos(const Cplx& z) {
  mpfr_prec_t p = z.prec();
  Real s(p), c(p), sh(p), ch(p);
  sin_cos(s, c, z.re);
  sinh_cosh(sh, ch, z.im);
  return Cplx(c * ch, -(s * sh));
}

inline Cplx from_polar(const Real& r, const Real& theta) {
  mpfr_prec_t p = std::max(r.prec(), theta.prec());
  Real s(p), c(p);
  sin_cos(s, c, theta);
  return Cplx(r * c, r * s);
}

// Principal square root.
inline Cplx csqrt(const Cplx& z) {
  mpfr_prec_t p = z.prec();
  Real r = abs(z);
  if (r.is_zero()) return Cplx(p);
  Real two = Real::of_long(2, p);
  Real half_arg = arg(z) / two;
  return from_polar(sqrt(r), half_arg);
}

// Principal z^s for real s.
inline Cplx cpow(const Cplx& z, const Real& s) { return cexp(clog(z) * s); }

inline Real dist(const Cplx& a, const Cplx& b) { return abs(a - b); }

}  // namespace qk
