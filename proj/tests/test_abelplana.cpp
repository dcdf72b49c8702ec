#include <cmath>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "oracles.hpp"
#include "qknot/abelplana.hpp"

using namespace qk;

namespace {

Real tol(long e) { return pow2(e, 64); }

Cplx kernel(const Real& kappa, const Cplx& u, const Rat& v, mpfr_prec_t prec) {
  KernelParams kp;
  kp.kappa = kappa;
  kp.u = u;
  kp.v = v;
  kp.prec = prec;
  return h_kernel(kp);
}

}  // namespace

TEST_CASE("corner closed form") {
  for (mpfr_prec_t prec : {192L, 256L}) {
    Real pi = const_pi(prec);
    for (long kd : {8L, 64L, 512L}) {
      Real kappa = Real::of_long(1, prec) / kd;
      Cplx h = kernel(kappa, Cplx::of_long(1, prec), Rat(0), prec);
      Cplx want(-log(kappa) / 2L, pi * kappa / 12L - pi / 4L);
      CHECK(abs(h - want) < tol(-prec / 2));
    }
  }
}

TEST_CASE("reflection identity over a grid") {
  const mpfr_prec_t prec = 160;
  Real pi = const_pi(prec);
  std::vector<Cplx> us;
  for (long j = 1; j <= 16; ++j)
    us.push_back(Cplx(Rat(j, 17).to_real(prec), Real(prec)));
  us.push_back(Cplx(Real::of_double(0.3, prec), Real::of_double(0.2, prec)));
  us.push_back(Cplx(Real::of_double(0.71, prec), Real::of_double(-0.55, prec)));
  for (long kd : {9L, 33L}) {
    Real kappa = Real::of_long(1, prec) / kd;
    for (long i : {1L, 3L, 6L, 9L, 12L}) {
      Rat v(i, 13);
      Rat b1 = oracle::bernoulli_tilde(1, v);
      Rat b2 = oracle::bernoulli_tilde(2, v);
      for (const Cplx& u : us) {
        Cplx lhs = kernel(kappa, Cplx(Real::of_long(1, prec) - u.re, -u.im), -v, prec) +
                   kernel(kappa, u, v, prec);
        // -2 pi i B_1(u) B~_1(v) + pi i kappa B~_2(v)
        Cplx b1u(u.re - Real::of_double(0.5, prec), u.im);
        Cplx rhs = Cplx(Real(prec), -(pi * 2) * b1.to_real(prec)) * b1u +
                   Cplx(Real(prec), pi * kappa * b2.to_real(prec));
        CHECK(abs(lhs - rhs) < tol(-prec / 2 + 6));
      }
    }
  }
}

TEST_CASE("edge difference identity") {
  const mpfr_prec_t prec = 160;
  for (long kd : {9L, 33L}) {
    Real kappa = Real::of_long(1, prec) / kd;
    for (long i = 1; i <= 12; ++i) {
      Rat v(i, 13);
      Cplx gap = kernel(kappa, Cplx::of_long(1, prec), v, prec) -
                 kernel(kappa, Cplx(prec), v, prec);
      Cplx want = f_log1me(Rat(1) - v, prec);  // f({-v})
      CHECK(abs(gap - want) < tol(-prec / 2 + 6));
    }
  }
}

TEST_CASE("kernel growth envelope") {
  // frozen regression form of the logarithmic-growth bound:
  // |H_kappa(u, v) + log|u|| <= 4 log(2/kappa) on a sample of the domain
  const mpfr_prec_t prec = 128;
  for (long kd : {8L, 64L, 512L}) {
    Real kappa = Real::of_long(1, prec) / kd;
    Real bound = log(Real::of_long(2 * kd, prec)) * 4L;
    std::vector<Cplx> us = {
        Cplx(Real::of_double(0.05, prec), Real(prec)),
        Cplx(Real::of_double(0.3, prec), Real::of_double(0.4, prec)),
        Cplx(Real::of_double(0.5, prec), Real(prec)),
        Cplx(Real::of_double(0.9, prec), Real::of_double(-0.8, prec))};
    for (const Rat& v : {Rat(0), Rat(1, 3)}) {
      for (const Cplx& u : us) {
        Cplx h = kernel(kappa, u, v, prec);
        CHECK(abs(h + Cplx::of_real(log(abs(u)))) < bound);
      }
    }
  }
}

TEST_CASE("pole and near-pole refusals") {
  const mpfr_prec_t prec = 192;
  Real kappa = Real::of_long(1, prec) / 16L;
  CHECK_THROWS_AS(kernel(kappa, Cplx(prec), Rat(0), prec), Error);
  // nonzero distance below the 2^{-prec/4} guard is refused too
  Cplx near_zero(pow2(-prec / 3, prec), Real(prec));
  CHECK_THROWS_AS(kernel(kappa, near_zero, Rat(1, 5), prec), Error);
  Cplx near_one(Real::of_long(1, prec) - pow2(-prec / 3, prec), Real(prec));
  CHECK_THROWS_AS(kernel(kappa, near_one, Rat(1, 5), prec), Error);
}

TEST_CASE("boundary moment integrals") {
  const mpfr_prec_t prec = 192;
  CHECK(abs(b_integral(1, Rat(0), prec) + Real::of_long(1, prec) / 24L) <
        tol(-prec / 2 + 4));
  for (long ell = 0; ell <= 8; ++ell) {
    for (long i = 0; i <= 6; ++i) {
      Rat v(i, 7);
      Real got = b_integral(ell, v, prec);
      Rat tilde = oracle::bernoulli_tilde(static_cast<int>(ell) + 1, v);
      Real want = tilde.to_real(prec) / (2 * (ell + 1));
      if (ell % 2 == 1) want = -want;
      CHECK(abs(got - want) < tol(-prec / 2 + 8));
    }
  }
  CHECK_THROWS_AS(b_integral(-1, Rat(0), prec), Error);
  CHECK_THROWS_AS(b_integral(0, Rat(3, 2), prec), Error);
}

TEST_CASE("error term against its kernel form") {
  const mpfr_prec_t prec = 192;
  // q = 1 collapses to a single kernel: E_0(lambda, kappa) = -H_kappa(1-lambda, 0)
  Real kappa = Real::of_long(1, prec) / 20L;
  for (double lv : {0.25, 0.6}) {
    ErrParams ep;
    ep.s = 0;
    ep.lambda = Cplx(Real::of_double(lv, prec), Real(prec));
    ep.kappa = kappa;
    ep.p = 1;
    ep.pbar = 1;
    ep.q = 1;
    ep.prec = prec;
    Cplx e = err_E(ep);
    Cplx h = kernel(kappa, Cplx(Real::of_double(1.0 - lv, prec), Real(prec)), Rat(0), prec);
    CHECK(abs(e + h) < tol(-prec / 2 + 6));
    // conjugate side at lambda = 0 mirrors the plain side
    ErrParams e0 = ep;
    e0.lambda = Cplx(prec);
    Cplx plain = err_E(e0);
    Cplx star = err_Estar(e0);
    CHECK(abs(star - conj(plain)) < tol(-prec / 2 + 6));
  }
}

TEST_CASE("shared evaluator agrees with single-shot terms") {
  const mpfr_prec_t prec = 160;
  const long p = 2, pbar = 3, q = 5;
  Real kappa = Real::of_long(1, prec) / 50L;
  ErrEvaluator ev(p, pbar, q, kappa, prec);
  mpfr_prec_t wp = ev.working_prec();
  CHECK(wp >= prec / 2);
  for (double lv : {0.0, 0.3, 0.62}) {
    for (long s = 0; s < q; ++s) {
      ErrParams ep;
      ep.s = s;
      ep.lambda = Cplx(Real::of_double(lv, prec), Real(prec));
      ep.kappa = kappa;
      ep.p = p;
      ep.pbar = pbar;
      ep.q = q;
      ep.prec = prec;
      Real lam = Real::of_double(lv, wp);
      CHECK(abs(ev.value(s, lam) - err_E(ep)) < tol(-prec / 4));
      CHECK(abs(ev.value_star(s, lam) - err_Estar(ep)) < tol(-prec / 4));
    }
  }
}

TEST_CASE("taylor coefficients describe the small-kappa expansion") {
  const mpfr_prec_t prec = 224;
  const long p = 2, pbar = 3, q = 5, s = 1;
  Cplx lambda(Real::of_double(0.4, prec), Real(prec));

  // the ell = 0 coefficient equals its defining sum, assembled here directly
  Cplx direct(prec);
  for (long g = 1; g <= q; ++g) {
    long rep = ((g * pbar - s) % q + q) % q;
    if (rep == 0) rep = q;  // representative in [1, q]
    Rat b1(2 * rep - q, 2 * q);
    Cplx arg(Rat(g, q).to_real(prec) - lambda.re / q, Real(prec));
    direct += f_log1me(arg) * b1.to_real(prec);
  }
  CHECK(abs(err_taylor(s, 0, lambda, p, pbar, q, prec) - direct) < tol(-prec / 2 + 8));

  // truncation defect scales like kappa^{M+1}
  for (long M = 0; M <= 2; ++M) {
    std::vector<Real> defects;
    for (long kd : {64L, 128L, 256L}) {
      Real kappa = Real::of_long(1, prec) / kd;
      ErrParams ep;
      ep.s = s;
      ep.lambda = lambda;
      ep.kappa = kappa;
      ep.p = p;
      ep.pbar = pbar;
      ep.q = q;
      ep.prec = prec;
      Cplx e = err_E(ep);
      Cplx approx(prec);
      Real qk_pow = Real::of_long(1, prec);
      for (long ell = 0; ell <= M; ++ell) {
        approx += err_taylor(s, ell, lambda, p, pbar, q, prec) * qk_pow;
        qk_pow *= kappa * q;
      }
      defects.push_back(abs(e - approx));
    }
    for (size_t i = 0; i + 1 < defects.size(); ++i) {
      Real ratio = defects[i] / defects[i + 1];
      double lo = std::pow(2.0, static_cast<double>(M));      // allow one order slack
      double hi = std::pow(2.0, static_cast<double>(M) + 2);
      CHECK(ratio > lo);
      CHECK(ratio < hi);
    }
  }

  // the starred coefficients drive the starred expansion the same way
  {
    Real kappa = Real::of_long(1, prec) / 128L;
    ErrParams ep;
    ep.s = s;
    ep.lambda = lambda;
    ep.kappa = kappa;
    ep.p = p;
    ep.pbar = pbar;
    ep.q = q;
    ep.prec = prec;
    Cplx e = err_Estar(ep);
    Cplx approx(prec);
    Real qk_pow = Real::of_long(1, prec);
    for (long ell = 0; ell <= 2; ++ell) {
      approx += err_taylor_star(s, ell, lambda, p, pbar, q, prec) * qk_pow;
      qk_pow *= kappa * q;
    }
    Real defect = abs(e - approx);
    Real scale = abs(Real::of_long(q, prec) * kappa);
    CHECK(defect < sqr(scale) * scale * 4L);  // ~ (q kappa)^3 with small constant
  }

  // strip guard on the expansion point
  CHECK_THROWS_AS(err_taylor(s, 0, Cplx(Real::of_double(0.01, prec), Real(prec)),
                             p, pbar, q, prec),
                  Error);
}
