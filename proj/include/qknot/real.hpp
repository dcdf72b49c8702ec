#pragma once

#include <mpfr.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace qk {

// Status codes shared by the C++ core, the C API and the CLI exit codes.
enum class Status : int { Ok = 0, Invalid = 2, Cap = 3, Disk = 4 };

struct Error : std::runtime_error {
  Status status;
  explicit Error(Status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

inline void require(bool cond, Status s, const std::string& msg) {
  if (!cond) throw Error(s, msg);
}

// Arbitrary-precision binary float on MPFR. Each value carries its own
// precision; binary operations round once, at the max of the two operand
// precisions. The raw handle is public so that inner loops can work in place.
class Real {
 public:
  mpfr_t v;

  explicit Real(mpfr_prec_t prec = 64) {
    mpfr_init2(v, prec);
    mpfr_set_zero(v, 1);
  }
  Real(const Real& o) {
    mpfr_init2(v, mpfr_get_prec(o.v));
    mpfr_set(v, o.v, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v, MPFR_PREC_MIN);
    mpfr_swap(v, o.v);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v, mpfr_get_prec(o.v));
      mpfr_set(v, o.v, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v, o.v);
    return *this;
  }
  ~Real() { mpfr_clear(v); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v); }

  static Real of_long(long x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si(r.v, x, MPFR_RNDN);
    return r;
  }
  static Real of_double(double x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_d(r.v, x, MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v) != 0; }
  bool is_nan() const { return mpfr_nan_p(v) != 0; }
  bool is_finite() const { return mpfr_number_p(v) != 0; }
  int sgn() const { return mpfr_sgn(v); }

  // log2 of magnitude; very negative for zero.
  long mag_exp() const {
    if (mpfr_zero_p(v) || !mpfr_number_p(v)) return -(1L << 40);
    return static_cast<long>(mpfr_get_exp(v));
  }

  Real rounded_to(mpfr_prec_t prec) const {
    Real r(prec);
    mpfr_set(r.v, v, MPFR_RNDN);
    return r;
  }

  std::string dec_string(long digits) const;  // shortest-style decimal, fixed digit count
  std::string hex_string() const;             // exact round-trip form ("%Ra")
  static Real parse_dec(const std::string& s, mpfr_prec_t prec);
  static Real parse_hex(const std::string& s, mpfr_prec_t prec);
};

inline mpfr_prec_t prec_max(const Real& a, const Real& b) {
  return std::max(mpfr_get_prec(a.v), mpfr_get_prec(b.v));
}

#define QK_REAL_BINOP(name, fn)                          \
  inline Real name(const Real& a, const Real& b) {       \
    Real r(prec_max(a, b));                              \
    fn(r.v, a.v, b.v, MPFR_RNDN);                        \
    return r;                                            \
  }

QK_REAL_BINOP(operator+, mpfr_add)
QK_REAL_BINOP(operator-, mpfr_sub)
QK_REAL_BINOP(operator*, mpfr_mul)
QK_REAL_BINOP(operator/, mpfr_div)
QK_REAL_BINOP(atan2, mpfr_atan2)
QK_REAL_BINOP(hypot, mpfr_hypot)
QK_REAL_BINOP(pow, mpfr_pow)
#undef QK_REAL_BINOP

#define QK_REAL_UNOP(name, fn)          \
  inline Real name(const Real& a) {     \
    Real r(a.prec());                   \
    fn(r.v, a.v, MPFR_RNDN);            \
    return r;                           \
  }

QK_REAL_UNOP(operator-, mpfr_neg)
QK_REAL_UNOP(abs, mpfr_abs)
QK_REAL_UNOP(sqr, mpfr_sqr)
QK_REAL_UNOP(sqrt, mpfr_sqrt)
QK_REAL_UNOP(exp, mpfr_exp)
QK_REAL_UNOP(log, mpfr_log)
QK_REAL_UNOP(sin, mpfr_sin)
QK_REAL_UNOP(cos, mpfr_cos)
QK_REAL_UNOP(tan, mpfr_tan)
QK_REAL_UNOP(atan, mpfr_atan)
QK_REAL_UNOP(sinh, mpfr_sinh)
QK_REAL_UNOP(cosh, mpfr_cosh)
QK_REAL_UNOP(floor, mpfr_rint_floor)
#undef QK_REAL_UNOP

inline Real operator+(const Real& a, long b) {
  Real r(a.prec());
  mpfr_add_si(r.v, a.v, b, MPFR_RNDN);
  return r;
}
inline Real operator-(const Real& a, long b) {
  Real r(a.prec());
  mpfr_sub_si(r.v, a.v, b, MPFR_RNDN);
  return r;
}
inline Real operator*(const Real& a, long b) {
  Real r(a.prec());
  mpfr_mul_si(r.v, a.v, b, MPFR_RNDN);
  return r;
}
inline Real operator/(const Real& a, long b) {
  Real r(a.prec());
  mpfr_div_si(r.v, a.v, b, MPFR_RNDN);
  return r;
}
inline Real operator+(long a, const Real& b) { return b + a; }
inline Real operator*(long a, const Real& b) { return b * a; }
inline Real operator-(long a, const Real& b) {
  Real r(b.prec());
  mpfr_si_sub(r.v, a, b.v, MPFR_RNDN);
  return r;
}
inline Real operator/(long a, const Real& b) {
  Real r(b.prec());
  mpfr_si_div(r.v, a, b.v, MPFR_RNDN);
  return r;
}
inline Real& operator+=(Real& a, const Real& b) {
  mpfr_add(a.v, a.v, b.v, MPFR_RNDN);
  return a;
}
inline Real& operator-=(Real& a, const Real& b) {
  mpfr_sub(a.v, a.v, b.v, MPFR_RNDN);
  return a;
}
inline Real& operator*=(Real& a, const Real& b) {
  mpfr_mul(a.v, a.v, b.v, MPFR_RNDN);
  return a;
}
inline Real& operator/=(Real& a, const Real& b) {
  mpfr_div(a.v, a.v, b.v, MPFR_RNDN);
  return a;
}

inline void sin_cos(Real& s, Real& c, const Real& x) { mpfr_sin_cos(s.v, c.v, x.v, MPFR_RNDN); }
inline void sinh_cosh(Real& s, Real& c, const Real& x) { mpfr_sinh_cosh(s.v, c.v, x.v, MPFR_RNDN); }

inline int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.v, b.v); }
inline bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v, b.v) != 0; }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v, b.v) != 0; }
inline bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v, b.v) != 0; }
inline bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v, b.v) != 0; }
inline bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v, b) < 0; }
inline bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v, b) > 0; }
inline bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v, b.v) != 0; }
inline bool operator!=(const Real& a, const Real& b) { return mpfr_equal_p(a.v, b.v) == 0; }

Real const_pi(mpfr_prec_t prec);
Real const_log2(mpfr_prec_t prec);
Real const_catalan(mpfr_prec_t prec);

// 2^e as a Real (exact), e.g. for tolerance thresholds.
inline Real pow2(long e, mpfr_prec_t prec = 64) {
  Real r(prec);
  mpfr_set_ui_2exp(r.v, 1, e, MPFR_RNDN);
  return r;
}

}  // namespace qk
