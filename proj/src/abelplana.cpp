#include <cmath>

#include "qknot/abelplana.hpp"

#include "qknot/quad.hpp"

#include <vector>

namespace qk {
namespace {

// One (kappa, precision) quadrature cell.  Holds the node rule plus lazily
// grown per-node tables of cosh/sinh(pi kappa t_j), which every integral that
// shares this kappa reuses.  For real u the integrands are assembled from
// w = 2 sin(pi (u - i t kappa)) = 2 (sin(pi u) cosh(pi kappa t)
//                                    - i cos(pi u) sinh(pi kappa t)),
// whose principal log L gives both boundary values at once:
//   f(u - i t kappa) = L        + i pi (u - 1/2) + pi kappa t,
//   f(u + i t kappa) = conj(L)  + i pi (u - 1/2) - pi kappa t.
// Base-2 magnitude of a Real, safe for values far outside double range.
double log2_mag(const Real& x) {
  if (x.is_zero()) return -1e300;
  long e;
  double m = mpfr_get_d_2exp(&e, x.v, MPFR_RNDN);
  return std::log2(std::fabs(m)) + static_cast<double>(e);
}

struct Cell {
  mpfr_prec_t wp, et;
  const QuadRule& rule;
  Real kappa, pk, pi, half, scale;
  double pkT;  // pi * kappa * T as a double, for envelope estimates
  mutable std::vector<std::vector<Real>> ch, sh;
  // log2 of the node's weight divided by e^{2 pi t} - 1: combined with a bound
  // on the numerator this decides whether the node can contribute at all.
  mutable std::vector<std::vector<double>> env;

  Cell(const Real& kap, mpfr_prec_t wp_, mpfr_prec_t et_)
      : wp(wp_), et(et_), rule(quad_rule(wp_, et_)),
        kappa(kap.rounded_to(wp_)), pk(wp_), pi(const_pi(wp_)),
        half(wp_), scale(Real::of_long(4, wp_)) {
    pk = pi * kappa;
    pkT = (pk * rule.T).to_double();
    mpfr_set_ui_2exp(half.v, 1, -1, MPFR_RNDN);
  }

  void ensure_level(long lev) const {
    while (static_cast<long>(ch.size()) <= lev) {
      long l = static_cast<long>(ch.size());
      std::vector<Real> c, s;
      std::vector<double> e2;
      c.reserve(rule.levels[l].size());
      s.reserve(rule.levels[l].size());
      e2.reserve(rule.levels[l].size());
      for (const QuadNode& n : rule.levels[l]) {
        Real e = exp(pk * n.t);
        Real einv = 1 / e;
        c.push_back((e + einv) / 2);
        s.push_back((e - einv) / 2);
        e2.push_back(log2_mag(n.w) - log2_mag(n.E - 1));
      }
      ch.push_back(std::move(c));
      sh.push_back(std::move(s));
      env.push_back(std::move(e2));
    }
  }

  // Skip threshold for a numerator bounded by `num`: nodes with
  // env + log2(num) below -(et + 8) cannot move the sum past the tolerance.
  double skip_bar(double num) const {
    return -static_cast<double>(et + 8) - std::log2(num + 1e-300);
  }

  Cplx run(const QuadFn& f) const {
    QuadResult r = quad_halfline(rule, scale, f);
    if (!r.converged)
      throw Error(Status::Invalid, "kernel quadrature did not converge");
    // The kernel definitions carry a global factor i.
    return Cplx(-r.value.im, r.value.re);
  }

  // Bound on |f(u -+ it kappa)| over the whole node range, used to disable
  // tail nodes whose contribution cannot reach the tolerance.
  double numerator_bound(const Real& sin_pu) const {
    double lw = log2_mag(sin_pu) + 1;  // log2 |2 sin pi u|
    return std::fabs(lw) * 0.6931471805599453 + 2 * pkT + 8;
  }

  // i * int_0^inf [ f(u-it kappa)/(e(v)e^{2pi t}-1)
  //               - f(u+it kappa)/(e(-v)e^{2pi t}-1) ] dt,  v not an integer.
  // With A = 1/(e(v)E - 1), the two boundary values combine as
  //   fm A - fp conj(A) = 2 Re(A) (pi kappa t + i Im L) + 2 i Im(A) L0,
  // where L0 = log|w| + i pi (u - 1/2) and L = Log w.
  Cplx sph1_real(const Real& u, const Rat& v) const {
    Cplx ev = root_of_unity(v, wp);
    Real a(wp), b(wp);
    sin_cos(a, b, pi * u);
    Real a2 = 2 * a, b2 = -2 * b;
    Real pu = pi * (u - half);
    const double bar = skip_bar(numerator_bound(a));
    Cplx zero(wp);
    return run([&](const QuadNode& n, long lev, long idx) -> Cplx {
      ensure_level(lev);
      if (env[lev][idx] < bar) return zero;
      Real wr = a2 * ch[lev][idx];
      Real wi = b2 * sh[lev][idx];
      Real lre = log(wr * wr + wi * wi) / 2;
      Real lim = atan2(wi, wr);
      Real ptk = pk * n.t;
      Real den = (ev.re * n.E - 1);
      Real dism = ev.im * n.E;
      Real mod2 = den * den + dism * dism;
      Real ar = den / mod2, ai = -dism / mod2;
      return Cplx(2 * (ar * ptk - ai * pu), 2 * (ar * lim + ai * lre));
    });
  }

  // i * int_0^inf [ f(u-it kappa) - f(u+it kappa) ] / (e^{2pi t}-1) dt.
  // The numerator collapses to 2 pi kappa t + 2 i Im L.
  Cplx sph2_real(const Real& u) const {
    Real a(wp), b(wp);
    sin_cos(a, b, pi * u);
    Real a2 = 2 * a, b2 = -2 * b;
    const double bar = skip_bar(2 * pkT + 8);
    Cplx zero(wp);
    return run([&](const QuadNode& n, long lev, long idx) -> Cplx {
      ensure_level(lev);
      if (env[lev][idx] < bar) return zero;
      Real wr = a2 * ch[lev][idx];
      Real wi = b2 * sh[lev][idx];
      Real lim = atan2(wi, wr);
      Real em1 = n.E - 1;
      return Cplx((2 * (pk * n.t)) / em1, (2 * lim) / em1);
    });
  }

  Cplx sph1_cplx(const Cplx& u, const Rat& v) const {
    Cplx ev = root_of_unity(v, wp);
    return run([&](const QuadNode& n, long, long) -> Cplx {
      Real kt = kappa * n.t;
      Cplx fm = f_log1me(Cplx(u.re, u.im - kt));
      Cplx fp = f_log1me(Cplx(u.re, u.im + kt));
      Cplx A = recip(Cplx(ev.re * n.E - 1, ev.im * n.E));
      return fm * A - fp * conj(A);
    });
  }

  Cplx sph2_cplx(const Cplx& u) const {
    return run([&](const QuadNode& n, long, long) -> Cplx {
      Real kt = kappa * n.t;
      Cplx fm = f_log1me(Cplx(u.re, u.im - kt));
      Cplx fp = f_log1me(Cplx(u.re, u.im + kt));
      Real em1 = n.E - 1;
      return Cplx((fm.re - fp.re) / em1, (fm.im - fp.im) / em1);
    });
  }

  // Closed form of H_kappa(1, 0): -log(kappa)/2 - pi i/4 + pi i kappa/12.
  Cplx corner() const {
    Cplx h(wp);
    h.re = -log(kappa) / 2;
    h.im = pi * (kappa / 12) - pi / 4;
    return h;
  }
};

// Distance from u to the nearest integer (complex modulus).
Real integer_distance(const Cplx& u, mpfr_prec_t wp) {
  Real half(wp);
  mpfr_set_ui_2exp(half.v, 1, -1, MPFR_RNDN);
  Real fr = u.re - floor(u.re + half);
  return hypot(fr, u.im);
}

void check_kappa(const Real& kappa) {
  require(kappa > 0 && !(Real::of_long(1, kappa.prec()) < kappa), Status::Invalid,
          "h_kernel: kappa must lie in (0, 1]");
}

// Representative of n mod q in [1, q].
long rep1q(long n, long q) {
  long m = n % q;
  if (m < 0) m += q;
  return m == 0 ? q : m;
}

long mulmod(long a, long b, long q) {
  long long r = (static_cast<long long>(a % q) * (b % q)) % q;
  if (r < 0) r += q;
  return static_cast<long>(r);
}

} // namespace

Cplx h_kernel(const KernelParams& params) {
  check_kappa(params.kappa);
  const mpfr_prec_t prec = params.prec;
  const mpfr_prec_t wp = prec / 2 + 48, et = prec / 2 + 16;
  const Cplx u(params.u.re.rounded_to(wp), params.u.im.rounded_to(wp));
  if (u.re.sgn() < 0 || Real::of_long(1, wp) < u.re)
    throw Error(Status::Invalid, "h_kernel: Re u must lie in [0, 1]");

  const Rat vr = params.v.frac();
  const bool v_integer = vr.sgn() == 0;
  const bool u_real = u.im.is_zero();

  if (v_integer && u.re.is_zero() && u_real)
    throw Error(Status::Invalid, "h_kernel: pole at (u, v) = (0, 0)");
  Real dist = integer_distance(u, wp);
  if (!dist.is_zero() && dist < pow2(-(prec / 4), wp))
    throw Error(Status::Invalid, "h_kernel: u too close to an integer pole");

  Cell cell(params.kappa, wp, et);
  Cplx h(wp);
  if (v_integer) {
    if (u_real && (u.re - 1).is_zero()) {
      h = cell.corner();
    } else {
      if (u_real && (!(u.re > 0) || !(u.re < Real::of_long(1, wp))))
        throw Error(Status::Invalid, "h_kernel: integer v needs 0 < u < 1");
      Cplx fu = f_log1me(u);
      Cplx tail = u_real ? cell.sph2_real(u.re) : cell.sph2_cplx(u);
      h = tail - Cplx(fu.re / 2, fu.im / 2);
    }
  } else {
    h = u_real ? cell.sph1_real(u.re, vr) : cell.sph1_cplx(u, vr);
  }
  return Cplx(h.re.rounded_to(prec), h.im.rounded_to(prec));
}

Real b_integral(long ell, const Rat& v, mpfr_prec_t prec) {
  require(ell >= 0, Status::Invalid, "b_integral: ell must be >= 0");
  require(v.sgn() >= 0 && v < Rat(1), Status::Invalid,
          "b_integral: v must lie in [0, 1)");
  const mpfr_prec_t wp = prec / 2 + 48, et = prec / 2 + 16;
  const QuadRule& rule = quad_rule(wp, et);
  const Real scale = Real::of_long(1, wp);
  const bool v_zero = v.sgn() == 0;
  // Im((-i)^ell z) for z = t^ell / (e(v) e^{2pi t} - 1), by ell mod 4.
  const long phase = ell % 4;
  if (v_zero && phase % 2 == 0) return Real(prec); // integrand identically zero

  Cplx ev = root_of_unity(v, wp);
  QuadResult r = quad_halfline(rule, scale, [&](const QuadNode& n, long, long) {
    Real tl(wp);
    mpfr_pow_si(tl.v, n.t.v, ell, MPFR_RNDN);
    Real out(wp);
    if (v_zero) {
      out = tl / (n.E - 1);
      if (phase == 1) out = -out;
    } else {
      Cplx z = Cplx(tl, Real(wp)) * recip(Cplx(ev.re * n.E - 1, ev.im * n.E));
      switch (phase) {
        case 0: out = z.im; break;
        case 1: out = -z.re; break;
        case 2: out = -z.im; break;
        default: out = z.re; break;
      }
    }
    return Cplx(out, Real(wp));
  });
  if (!r.converged)
    throw Error(Status::Invalid, "b_integral quadrature did not converge");
  return r.value.re.rounded_to(prec);
}

// Shared body of err_E / err_Estar for real lambda, built around one Cell.
struct ErrEvaluator::Impl {
  long p, pbar, q;
  mpfr_prec_t prec;
  Cell cell;
  Real one, thresh;

  // The published accuracy of the boundary-kernel sums is 2^{-prec/4}; the
  // quadrature effort is scaled to beat that with margin rather than to the
  // full working precision, which keeps dense sweeps affordable.
  Impl(long p_, long pbar_, long q_, const Real& kappa, mpfr_prec_t prec_)
      : p(p_), pbar(pbar_), q(q_), prec(prec_),
        cell(kappa, prec_ / 4 + 64, prec_ / 4 + 24),
        one(Real::of_long(1, prec_ / 4 + 64)),
        thresh(pow2(-(prec_ / 4), prec_ / 4 + 64)) {
    require(q >= 1, Status::Invalid, "err_E: q must be >= 1");
    require(mulmod(p, pbar, q) == 1 % q, Status::Invalid,
            "err_E: p * pbar != 1 mod q");
    check_kappa(kappa);
  }

  void check_lambda(const Real& lam) const {
    require(lam.sgn() >= 0 && lam < one, Status::Invalid,
            "err_E: lambda must lie in [0, 1)");
    for (long g = 1; g <= q; ++g) {
      Real u = (g - lam) / q;
      Real dist = u < one - u ? u : one - u;
      require(dist.is_zero() || !(dist < thresh), Status::Invalid,
              "err_E: argument too close to a kernel pole");
    }
  }

  Rat v_of(long g, long s) const { return Rat(Int(g) * Int(pbar) - Int(s), Int(q)); }

  Cplx f_at(const Real& u) const { return f_log1me(Cplx(u, Real(cell.wp))); }

  Cplx value(long s, const Real& lambda) const {
    Real lam = lambda.rounded_to(cell.wp);
    check_lambda(lam);
    const long gs = rep1q(mulmod(p, s, q), q);
    Cplx sum(cell.wp);
    for (long g = 1; g <= q; ++g) {
      Real u = (g - lam) / q;
      if (g == gs) {
        if (lam.is_zero() && gs == q) {
          sum -= cell.corner();
        } else {
          Cplx fu = f_at(u);
          sum += Cplx(fu.re / 2, fu.im / 2) - cell.sph2_real(u);
        }
      } else {
        sum -= cell.sph1_real(u, v_of(g, s));
      }
    }
    return Cplx(sum.re.rounded_to(prec), sum.im.rounded_to(prec));
  }

  Cplx value_star(long s, const Real& lambda) const {
    Real lam = lambda.rounded_to(cell.wp);
    if (lam.is_zero()) return conj(value(s, lam));
    check_lambda(lam);
    const long gs = rep1q(mulmod(p, s, q), q);
    Cplx sum(cell.wp);
    for (long g = 1; g <= q; ++g) {
      Real u = ((q - g) + lam) / q;
      if (g == gs) {
        Cplx fu = f_at(u);
        sum += Cplx(fu.re / 2, fu.im / 2) + cell.sph2_real(u);
      } else {
        sum += cell.sph1_real(u, -v_of(g, s));
      }
    }
    return Cplx(sum.re.rounded_to(prec), sum.im.rounded_to(prec));
  }
};

ErrEvaluator::ErrEvaluator(long p, long pbar, long q, const Real& kappa,
                           mpfr_prec_t prec)
    : impl_(new Impl(p, pbar, q, kappa, prec)) {}
ErrEvaluator::~ErrEvaluator() { delete impl_; }
Cplx ErrEvaluator::value(long s, const Real& lambda) const {
  return impl_->value(s, lambda);
}
Cplx ErrEvaluator::value_star(long s, const Real& lambda) const {
  return impl_->value_star(s, lambda);
}
mpfr_prec_t ErrEvaluator::working_prec() const { return impl_->cell.wp; }

namespace {

// Generic-path twin of ErrEvaluator::Impl for complex lambda.
Cplx err_generic(const ErrParams& P, bool star) {
  require(P.q >= 1, Status::Invalid, "err_E: q must be >= 1");
  require(mulmod(P.p, P.pbar, P.q) == 1 % P.q, Status::Invalid,
          "err_E: p * pbar != 1 mod q");
  check_kappa(P.kappa);
  const mpfr_prec_t wp = P.prec / 2 + 48;
  Cplx lam(P.lambda.re.rounded_to(wp), P.lambda.im.rounded_to(wp));
  require(lam.re.sgn() >= 0 && lam.re < Real::of_long(1, wp), Status::Invalid,
          "err_E: Re lambda must lie in [0, 1)");
  const bool lam_zero = lam.re.is_zero() && lam.im.is_zero();
  if (star && lam_zero) {
    ErrParams Q = P;
    Q.lambda = Cplx(wp);
    return conj(err_generic(Q, false));
  }

  Cell cell(P.kappa, wp, P.prec / 2 + 16);
  Real thresh = pow2(-(P.prec / 4), wp);
  const long gs = rep1q(mulmod(P.p, P.s, P.q), P.q);
  Cplx sum(wp);
  for (long g = 1; g <= P.q; ++g) {
    Cplx u = star ? Cplx((Real::of_long(P.q - g, wp) + lam.re) / P.q, lam.im / P.q)
                  : Cplx((g - lam.re) / P.q, -lam.im / P.q);
    Real dist = integer_distance(u, wp);
    require(dist.is_zero() || !(dist < thresh), Status::Invalid,
            "err_E: argument too close to a kernel pole");
    Rat v = Rat(Int(g) * Int(P.pbar) - Int(P.s), Int(P.q));
    if (g == gs) {
      if (!star && lam_zero && gs == P.q) {
        sum -= cell.corner();
        continue;
      }
      Cplx fu = f_log1me(u);
      Cplx tail = u.im.is_zero() ? cell.sph2_real(u.re) : cell.sph2_cplx(u);
      Cplx head(fu.re / 2, fu.im / 2);
      if (star)
        sum += head + tail;
      else
        sum += head - tail;
    } else {
      Rat vv = star ? -v : v;
      Cplx term = u.im.is_zero() ? cell.sph1_real(u.re, vv) : cell.sph1_cplx(u, vv);
      if (star)
        sum += term;
      else
        sum -= term;
    }
  }
  return Cplx(sum.re.rounded_to(P.prec), sum.im.rounded_to(P.prec));
}

} // namespace

Cplx err_E(const ErrParams& params) {
  if (params.lambda.im.is_zero()) {
    ErrEvaluator ev(params.p, params.pbar, params.q, params.kappa, params.prec);
    return ev.value(params.s, params.lambda.re);
  }
  return err_generic(params, false);
}

Cplx err_Estar(const ErrParams& params) {
  if (params.lambda.im.is_zero()) {
    ErrEvaluator ev(params.p, params.pbar, params.q, params.kappa, params.prec);
    return ev.value_star(params.s, params.lambda.re);
  }
  return err_generic(params, true);
}

namespace {

Cplx taylor_sum(long s, long ell, const Cplx& lambda, long pbar, long q,
                bool star, mpfr_prec_t prec) {
  const mpfr_prec_t wp = prec + 16;
  Cplx lam(lambda.re.rounded_to(wp), lambda.im.rounded_to(wp));
  Rat lo(1, 16), hi(15, 16);
  require(lo.to_real(wp) < lam.re && lam.re < hi.to_real(wp), Status::Invalid,
          "err_taylor: Re lambda must lie in (1/16, 15/16)");

  Cplx sum(wp);
  for (long g = 1; g <= q; ++g) {
    Cplx u = star ? Cplx((Real::of_long(q - g, wp) + lam.re) / q, lam.im / q)
                  : Cplx((g - lam.re) / q, -lam.im / q);
    Rat weight(0);
    if (ell == 0) {
      // B_1 evaluated at the [1, q] representative: in (0, 1], never the
      // periodic extension.
      long m = rep1q(static_cast<long>(mulmod(g, pbar, q)) - s % q, q);
      weight = Rat(2 * m - q, 2 * q);
      sum += f_log1me(u) * weight.to_real(wp);
    } else {
      weight = bernoulli_tilde(ell + 1, Rat(Int(g) * Int(pbar) - Int(s), Int(q)));
      if (weight.sgn() != 0)
        sum += f_derivative(ell, u) * weight.to_real(wp);
    }
  }
  if (ell > 0) {
    Int den;
    mpz_ui_pow_ui(den.z, static_cast<unsigned long>(q),
                  static_cast<unsigned long>(ell));
    Int fac;
    mpz_fac_ui(fac.z, static_cast<unsigned long>(ell + 1));
    mpz_mul(den.z, den.z, fac.z);
    Rat coef(Int((!star && ell % 2 == 1) ? -1 : 1), den);
    sum *= coef.to_real(wp);
  }
  return Cplx(sum.re.rounded_to(prec), sum.im.rounded_to(prec));
}

} // namespace

Cplx err_taylor(long s, long ell, const Cplx& lambda, long p, long pbar,
                long q, mpfr_prec_t prec) {
  require(q >= 1 && ell >= 0, Status::Invalid, "err_taylor: bad parameters");
  require(mulmod(p, pbar, q) == 1 % q, Status::Invalid,
          "err_taylor: p * pbar != 1 mod q");
  return taylor_sum(s, ell, lambda, pbar, q, false, prec);
}

Cplx err_taylor_star(long s, long ell, const Cplx& lambda, long p, long pbar,
                     long q, mpfr_prec_t prec) {
  require(q >= 1 && ell >= 0, Status::Invalid, "err_taylor: bad parameters");
  require(mulmod(p, pbar, q) == 1 % q, Status::Invalid,
          "err_taylor: p * pbar != 1 mod q");
  return taylor_sum(s, ell, lambda, pbar, q, true, prec);
}

} // namespace qk
