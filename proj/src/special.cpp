#include "qknot/special.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include "qknot/quad.hpp"

namespace qk {

namespace {

std::mutex bern_mutex;
std::vector<Rat> bern_cache;  // B_0, B_1, ...

void grow_bernoulli(long n) {
  if (bern_cache.empty()) bern_cache.push_back(Rat(1));
  // B_n = -1/(n+1) * sum_{j<n} C(n+1, j) B_j
  for (long m = static_cast<long>(bern_cache.size()); m <= n; ++m) {
    Rat s(0);
    for (long j = 0; j < m; ++j) {
      if (j >= 3 && (j & 1)) continue;  // odd Bernoulli numbers vanish
      Int c;
      mpz_bin_uiui(c.z, static_cast<unsigned long>(m + 1), static_cast<unsigned long>(j));
      s = s + Rat(c, Int(1)) * bern_cache[static_cast<size_t>(j)];
    }
    bern_cache.push_back(-s / Rat(m + 1));
  }
}

}  // namespace

Rat bernoulli_number(long n) {
  require(n >= 0, Status::Invalid, "Bernoulli index must be >= 0");
  std::lock_guard<std::mutex> lock(bern_mutex);
  grow_bernoulli(n);
  return bern_cache[static_cast<size_t>(n)];
}

Rat bernoulli_poly(long k, const Rat& t) {
  require(k >= 0, Status::Invalid, "Bernoulli degree must be >= 0");
  Rat p(0);
  for (long j = 0; j <= k; ++j) {
    Int c;
    mpz_bin_uiui(c.z, static_cast<unsigned long>(k), static_cast<unsigned long>(j));
    p = p * t + Rat(c, Int(1)) * bernoulli_number(j);
  }
  return p;
}

Rat bernoulli_tilde(long k, const Rat& t) {
  Rat fr = t.frac();
  if (k == 1 && fr.sgn() == 0) return Rat(0);
  return bernoulli_poly(k, fr);
}

Cplx root_of_unity(const Fraction& x, mpfr_prec_t prec) {
  Rat fr = x.frac();
  Real a = fr.to_real(prec);
  Real th = const_pi(prec) * 2 * a;
  Real s(prec), c(prec);
  sin_cos(s, c, th);
  return Cplx(c, s);
}

Real log_2sin_pi(const Rat& x, mpfr_prec_t prec) {
  Rat fr = x.frac();
  require(fr.sgn() > 0, Status::Invalid, "log(2 sin pi x) needs {x} in (0,1)");
  // sin(pi fr) = sin(pi (1-fr)); use the smaller argument for full accuracy.
  Rat m = (fr <= Rat(1, 2)) ? fr : Rat(1) - fr;
  Real s = sin(const_pi(prec) * m.to_real(prec));
  return log(s * 2);
}

Cplx f_log1me(const Cplx& z) {
  mpfr_prec_t p = z.prec();
  Real pi = const_pi(p);
  if (z.im.is_zero()) {
    require(z.re > 0.0 && z.re < 1.0, Status::Invalid,
            "f_log1me: real argument outside (0,1)");
    Real s = sin(pi * z.re);
    return Cplx(log(s * 2), pi * (z.re - Real::of_double(0.5, p)));
  }
  require(z.re >= Real(p) && z.re <= Real::of_long(1, p), Status::Invalid,
          "f_log1me: Re z outside [0,1]");
  Cplx w = csin(Cplx(pi * z.re, pi * z.im)) * 2L;
  Cplx lg = clog(w);
  return Cplx(lg.re - pi * z.im, lg.im + pi * (z.re - Real::of_double(0.5, p)));
}

Cplx f_log1me(const Rat& z, mpfr_prec_t prec) {
  Rat fr = z.frac();
  require(fr.sgn() > 0, Status::Invalid, "f_log1me: argument must not be an integer");
  Real re = log_2sin_pi(fr, prec);
  Real im = const_pi(prec) * (fr - Rat(1, 2)).to_real(prec);
  return Cplx(std::move(re), std::move(im));
}

namespace {

std::mutex cotpoly_mutex;
// cotpoly[m] = integer coefficients of Q_m(c) / pi^m where Q_0 = c and
// Q_{m+1} = -pi (1+c^2) Q_m'(c); then d^m/dz^m cot(pi z) = Q_m(cot(pi z)).
std::vector<std::vector<Int>> cotpoly_cache;

const std::vector<Int>& cot_poly(long m) {
  std::lock_guard<std::mutex> lock(cotpoly_mutex);
  if (cotpoly_cache.empty()) cotpoly_cache.push_back({Int(0), Int(1)});
  for (long j = static_cast<long>(cotpoly_cache.size()); j <= m; ++j) {
    const std::vector<Int>& a = cotpoly_cache.back();
    long deg = static_cast<long>(a.size()) - 1;
    std::vector<Int> b(static_cast<size_t>(deg + 2), Int(0));
    // b = -(1+c^2) a'(c)
    for (long i = 0; i <= deg + 1; ++i) {
      Int acc(0);
      if (i + 1 <= deg) acc = acc + Int(i + 1) * a[static_cast<size_t>(i + 1)];
      if (i >= 1 && i - 1 <= deg && i - 1 >= 1)
        acc = acc + Int(i - 1) * a[static_cast<size_t>(i - 1)];
      mpz_neg(acc.z, acc.z);
      b[static_cast<size_t>(i)] = std::move(acc);
    }
    cotpoly_cache.push_back(std::move(b));
  }
  return cotpoly_cache[static_cast<size_t>(m)];
}

Real int_to_real(const Int& n, mpfr_prec_t prec) {
  Real r(prec);
  mpfr_set_z(r.v, n.z, MPFR_RNDN);
  return r;
}

}  // namespace

Cplx f_derivative(long nu, const Cplx& z) {
  require(nu >= 1, Status::Invalid, "derivative order must be >= 1");
  mpfr_prec_t p = z.prec();
  if (z.im.is_zero())
    require(mpfr_integer_p(z.re.v) == 0, Status::Invalid,
            "f_derivative: pole at integer argument");
  Real pi = const_pi(p);
  Cplx pz(pi * z.re, pi * z.im);
  Cplx c = ccos(pz) / csin(pz);
  if (nu == 1) return Cplx(pi * c.re, pi * c.im + pi);
  const std::vector<Int>& a = cot_poly(nu - 1);
  Cplx acc = Cplx::of_real(int_to_real(a.back(), p));
  for (long j = static_cast<long>(a.size()) - 2; j >= 0; --j)
    acc = acc * c + Cplx::of_real(int_to_real(a[static_cast<size_t>(j)], p));
  Real pw(p);
  mpfr_pow_si(pw.v, pi.v, nu, MPFR_RNDN);
  return acc * pw;
}

Real f_derivative_real(long nu, const Real& x) {
  require(nu >= 2, Status::Invalid, "real fast path needs order >= 2");
  mpfr_prec_t p = x.prec();
  require(mpfr_integer_p(x.v) == 0, Status::Invalid, "pole at integer argument");
  Real pi = const_pi(p);
  Real c(p);
  mpfr_cot(c.v, (pi * x).v, MPFR_RNDN);
  const std::vector<Int>& a = cot_poly(nu - 1);
  Real acc = int_to_real(a.back(), p);
  for (long j = static_cast<long>(a.size()) - 2; j >= 0; --j)
    acc = acc * c + int_to_real(a[static_cast<size_t>(j)], p);
  Real pw(p);
  mpfr_pow_si(pw.v, pi.v, nu, MPFR_RNDN);
  return acc * pw;
}

namespace {

std::mutex zeta_mutex;
std::map<mpfr_prec_t, std::vector<Real>> zeta_even_cache;  // zeta(2), zeta(4), ...

Real zeta_even(long k, mpfr_prec_t wp) {
  std::lock_guard<std::mutex> lock(zeta_mutex);
  std::vector<Real>& v = zeta_even_cache[wp];
  for (long j = static_cast<long>(v.size()); j < k; ++j) {
    Real z(wp);
    mpfr_zeta_ui(z.v, static_cast<unsigned long>(2 * (j + 1)), MPFR_RNDN);
    v.push_back(std::move(z));
  }
  return v[static_cast<size_t>(k - 1)];
}

// Cl2(theta) on [0, pi]: theta (1 - log theta) + sum_k zeta(2k)/(k(2k+1)) (theta/2pi)^{2k} theta.
Real clausen2(const Real& theta, mpfr_prec_t wp, long et) {
  if (theta.is_zero()) return Real(wp);
  Real pi = const_pi(wp);
  Real u = sqr(theta / (pi * 2));  // <= 1/4
  Real tol = pow2(-et, wp);
  Real s(wp);
  Real upow = u;
  for (long k = 1;; ++k) {
    Real term = zeta_even(k, wp) * upow / Real::of_long(k * (2 * k + 1), wp);
    s += term;
    if (term * theta < tol) break;
    require(k < 100000, Status::Invalid, "Clausen series failed to converge");
    upow *= u;
  }
  return theta * (Real::of_long(1, wp) - log(theta)) + theta * s;
}

}  // namespace

Real lobachevsky(const Real& lambda, mpfr_prec_t prec) {
  mpfr_prec_t wp = prec + 32;
  Real u = lambda.rounded_to(wp);
  u -= floor(u);  // now in [0,1)
  Real pi = const_pi(wp);
  bool flip = u > 0.5;
  if (flip) u = 1L - u;
  Real cl = clausen2(pi * 2 * u, wp, prec + 16);
  Real res = cl / (pi * 2);
  if (flip) res = -res;
  return res.rounded_to(prec);
}

Real lobachevsky(const Rat& lambda, mpfr_prec_t prec) {
  mpfr_prec_t wp = prec + 32;
  Rat fr = lambda.frac();
  bool flip = fr > Rat(1, 2);
  if (flip) fr = Rat(1) - fr;
  Real pi = const_pi(wp);
  Real cl = clausen2(pi * 2 * fr.to_real(wp), wp, prec + 16);
  Real res = cl / (pi * 2);
  if (flip) res = -res;
  return res.rounded_to(prec);
}

std::vector<Real> lobachevsky_lattice(long n, mpfr_prec_t prec) {
  require(n >= 1, Status::Invalid, "lattice size must be >= 1");
  std::vector<Real> out(static_cast<size_t>(n), Real(prec));
  for (long j = 1; 2 * j <= n; ++j) {
    out[static_cast<size_t>(j)] = lobachevsky(Rat(j, n), prec);
    if (j != n - j) out[static_cast<size_t>(n - j)] = -out[static_cast<size_t>(j)];
  }
  return out;
}

Cplx lie(const Cplx& lambda, mpfr_prec_t prec) {
  Real pi = const_pi(prec);
  require(lambda.re >= Real(prec) && lambda.re < 1.0, Status::Invalid,
          "lie: Re(lambda) must be in [0,1)");
  if (lambda.im.is_zero()) {
    const Real& x = lambda.re;
    Real im = pi * ((x - sqr(x)) / 2L - Real::of_long(1, prec) / 12L);
    return Cplx(-lobachevsky(x, prec), std::move(im));
  }
  mpfr_prec_t wp = prec + 32;
  long et = prec + 16;
  const QuadRule& rule = quad_rule(wp, et);
  Cplx lam(lambda.re.rounded_to(wp), lambda.im.rounded_to(wp));
  QuadResult qr = quad_01(rule, Real::of_long(1, wp), [&](const QuadNode& n, long, long) {
    Cplx arg(Real::of_long(1, wp) - lam.re * n.x, -(lam.im * n.x));
    return f_log1me(arg) * lam;
  });
  require(qr.converged, Status::Invalid, "lie: quadrature did not converge");
  Real pi_wp = const_pi(wp);
  Cplx res = qr.value - Cplx(Real(wp), pi_wp / 12L);
  return Cplx(res.re.rounded_to(prec), res.im.rounded_to(prec));
}

Cplx lie(const Rat& lambda, mpfr_prec_t prec) {
  require(lambda.sgn() >= 0 && lambda < Rat(1), Status::Invalid,
          "lie: rational argument must be in [0,1)");
  Rat im_part = (lambda - lambda * lambda) / Rat(2) - Rat(1, 12);
  Real im = const_pi(prec) * im_part.to_real(prec);
  return Cplx(-lobachevsky(lambda, prec), std::move(im));
}

namespace {

// Factor 1 - e(a/k) as (2 s^2, -2 s c) with s = sin(pi a/k) > 0 computed from
// the reduced angle min(a, k-a)/k for full relative accuracy; 0 < a < k.
Cplx one_minus_root(long a, long k, const Real& pi, mpfr_prec_t wp) {
  long m = std::min(a, k - a);
  Real th = pi * m / k;
  Real s(wp), c(wp);
  sin_cos(s, c, th);
  if (m != a) c = -c;
  return Cplx(s * s * 2L, -(s * c * 2L));
}

}  // namespace

Cplx pochhammer(const Fraction& alpha, long r, mpfr_prec_t prec) {
  require(r >= 0, Status::Invalid, "pochhammer index must be >= 0");
  mpfr_prec_t wp = prec + 32;
  long k = alpha.den().to_long();
  long h = fmod(alpha.num(), alpha.den()).to_long();  // in [0, k)
  if (r == 0) return Cplx::of_long(1, prec);
  if (k == 1 || r >= k) return Cplx(prec);  // a factor 1 - e(integer) = 0 occurs
  Real pi = const_pi(wp);
  Cplx prod = Cplx::of_long(1, wp);
  long a = 0;
  for (long i = 1; i <= r; ++i) {
    a += h;
    if (a >= k) a -= k;
    prod *= one_minus_root(a, k, pi, wp);
  }
  return Cplx(prod.re.rounded_to(prec), prod.im.rounded_to(prec));
}

std::vector<Cplx> pochhammer_prefix(const Fraction& alpha, long count, mpfr_prec_t prec) {
  long k = alpha.den().to_long();
  long h = fmod(alpha.num(), alpha.den()).to_long();
  require(count >= 0 && count < k, Status::Invalid,
          "prefix table must stop before the vanishing factor");
  Real pi = const_pi(prec);
  std::vector<Cplx> out;
  out.reserve(static_cast<size_t>(count) + 1);
  out.push_back(Cplx::of_long(1, prec));
  long a = 0;
  for (long i = 1; i <= count; ++i) {
    a += h;
    if (a >= k) a -= k;
    out.push_back(out.back() * one_minus_root(a, k, pi, prec));
  }
  return out;
}

Cplx bracket(const Fraction& alpha, long n, mpfr_prec_t prec) {
  long k = alpha.den().to_long();
  long np = ((n % k) + k) % k;
  Cplx val = pochhammer(alpha, np, prec);
  Real rs = 1L / sqrt(Real::of_long(k, prec));
  return val * rs;
}

Real cotangent_sum_c0(long h, long k, mpfr_prec_t prec) {
  require(k >= 1, Status::Invalid, "k must be >= 1");
  long hh = ((h % k) + k) % k;
  require(std::gcd(hh == 0 ? k : hh, k) == 1, Status::Invalid, "need gcd(h,k) = 1");
  Real pi = const_pi(prec);
  Real s(prec);
  long a = 0;
  for (long m = 1; m < k; ++m) {
    a += hh;
    if (a >= k) a -= k;
    long mm = std::min(a, k - a);
    Real ct(prec);
    mpfr_cot(ct.v, (pi * mm / k).v, MPFR_RNDN);
    if (mm != a) ct = -ct;
    s -= ct * m / k;
  }
  return s;
}

Real cot_partial_max(long h, long k, mpfr_prec_t prec) {
  require(h >= 2, Status::Invalid, "h must be >= 2");
  require(std::gcd(h, k) == 1, Status::Invalid, "need gcd(h,k) = 1");
  long kb = mod_inverse(((k % h) + h) % h, h);
  Real pi = const_pi(prec);
  Real run(prec), best(prec);
  long a = 0;
  for (long n = 1; n <= h - 1; ++n) {
    a += kb;
    if (a >= h) a -= h;
    long mm = std::min(a, h - a);
    Real ct(prec);
    mpfr_cot(ct.v, (pi * mm / h).v, MPFR_RNDN);
    if (mm != a) ct = -ct;
    run += ct * n / h;
    Real mag = abs(run);
    if (mag > best) best = mag;
  }
  return best;
}

}  // namespace qk
