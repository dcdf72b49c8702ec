#include "qknot/modularity.hpp"

#include <algorithm>
#include <numeric>

#include "qknot/abelplana.hpp"
#include "qknot/special.hpp"

namespace qk {
namespace {

// e(z) = exp(2 pi i z) for complex z.
Cplx e2pi(const Cplx& z, mpfr_prec_t wp) {
  Real two_pi = 2 * const_pi(wp);
  return cexp(Cplx(-(two_pi * z.im), two_pi * z.re));
}

long mulmod(long a, long b, long m) {
  return static_cast<long>((static_cast<long long>(a) * b) % m);
}

struct IrContext {
  ModularSetup setup;
  mpfr_prec_t wp;
  std::vector<Cplx> top;    // (e[h/k])_n, n <= k-1
  std::vector<Cplx> bottom; // (e[N/d])_n, n <= Lmax
  Cplx phase;               // e[gx/24] / e[x/24]
  Cplx head;                // exp of the r-independent rhs terms
  ErrEvaluator ev;

  IrContext(const ModularSetup& s, mpfr_prec_t prec)
      : setup(s),
        wp(prec + 32),
        ev(s.p, s.pbar, s.q, s.kappa.to_real(prec), prec) {
    top = pochhammer_prefix(s.gx, s.k - 1, wp);
    long lmax = ((s.k - 1) * s.d) / s.k;
    bottom = pochhammer_prefix(s.x, lmax, wp);
    phase = root_of_unity(Rat(s.h, 24 * s.k), wp) *
            conj(root_of_unity(Rat(s.N, 24 * s.d), wp));
    // pi i (p + pbar)/(12 q) - pi i s(p,q) - pi i / 4 + log(k/d)/2
    Real pi = const_pi(wp);
    Real im = pi * Rat(s.p + s.pbar, 12 * s.q).to_real(wp) -
              pi * dedekind_sum(s.p, s.q).to_real(wp) - pi / 4;
    Real re = log(Rat(s.k, s.d).to_real(wp)) / 2;
    head = cexp(Cplx(re, im));
  }

  IrReport row(long r, mpfr_prec_t prec) const {
    require(r >= 1 && r < setup.k, Status::Invalid,
            "verify_ir: need 1 <= r < k");
    IrReport rep;
    rep.setup = setup;
    rep.r = r;
    rep.L = (r * setup.d) / setup.k;
    rep.lambda = Rat(r * setup.d - rep.L * setup.k, setup.k);

    Cplx lhs = top[r] * phase * recip(bottom[rep.L]);
    Cplx scaled = lie(rep.lambda, wp) *
                  Rat(setup.k, setup.q * setup.d).to_real(wp);
    // The boundary-kernel index is r shifted by pbar per completed window of
    // length k/d: s = r - pbar*L mod q.  (For L = 0 this is just r mod q.)
    long s = (r - setup.pbar * rep.L) % setup.q;
    if (s < 0) s += setup.q;
    Cplx err = ev.value(s, rep.lambda.to_real(ev.working_prec()));
    Cplx rhs = head * cexp(scaled + err);

    rep.lhs = Cplx(lhs.re.rounded_to(prec), lhs.im.rounded_to(prec));
    rep.rhs = Cplx(rhs.re.rounded_to(prec), rhs.im.rounded_to(prec));
    rep.defect = abs(lhs * recip(rhs) - Cplx::of_long(1, wp)).rounded_to(prec);
    return rep;
  }
};

} // namespace

IrReport verify_ir(const ModularSetup& setup, long r, mpfr_prec_t prec) {
  return IrContext(setup, prec).row(r, prec);
}

std::vector<IrReport> verify_ir_all(const ModularSetup& setup,
                                    mpfr_prec_t prec) {
  IrContext ctx(setup, prec);
  std::vector<IrReport> rows;
  rows.reserve(setup.k - 1);
  for (long r = 1; r < setup.k; ++r) rows.push_back(ctx.row(r, prec));
  return rows;
}

namespace {

struct ThpContext {
  long h, k, hbar, kbar;
  mpfr_prec_t wp;
  std::vector<Cplx> base;  // (e[kbar/h])_n for n < h
  std::vector<Real> cot;   // cot(pi m / h), m = 1..h-1
  Cplx lhs_root;           // e(-hbar/k)
  Cplx p_root;             // e(-1/k)
  Cplx m_root;             // e(-1/(hk))

  ThpContext(long h_in, long k_in, mpfr_prec_t prec)
      : h(h_in), k(k_in), wp(prec + 32) {
    require(4 <= h && h < k && std::gcd(h, k) == 1, Status::Invalid,
            "need 4 <= h < k with gcd(h, k) = 1");
    hbar = mod_inverse(h % k, k);
    kbar = mod_inverse(k % h, h);
    base = pochhammer_prefix(Rat(kbar, h), h - 1, wp);
    Real pi = const_pi(wp);
    cot.reserve(h - 1);
    for (long m = 1; m < h; ++m) {
      Real c(wp);
      mpfr_cot(c.v, (pi * m / h).v, MPFR_RNDN);
      cot.push_back(c);
    }
    lhs_root = root_of_unity(Rat(-hbar, k), wp);
    p_root = root_of_unity(Rat(-1, k), wp);
    m_root = root_of_unity(Rat(-1, h * k), wp);
  }
};

} // namespace

std::vector<Real> verify_thp_all(long h, long k, mpfr_prec_t prec) {
  ThpContext c(h, k, prec);
  const mpfr_prec_t wp = c.wp;
  const Real pi = const_pi(wp);
  const Cplx one = Cplx::of_long(1, wp);

  std::vector<Real> defects;
  defects.reserve(k);
  Cplx lhs = one, rhs_ml = one, p_factor = one;
  Cplx lhs_pow = one, p_pow = one, m_pow = one;
  Real h_pow = Real::of_long(1, wp);
  long floor_rh = 0;
  for (long r = 0; r < k; ++r) {
    if (r > 0) {
      lhs_pow = lhs_pow * c.lhs_root;
      lhs = lhs * (one - lhs_pow);
      m_pow = m_pow * c.m_root;
      if (r % h == 0) {
        ++floor_rh;
        h_pow = h_pow * h;
        p_pow = p_pow * c.p_root;
        p_factor = p_factor * (one - p_pow);
      } else {
        // M factor (1 + e[-r/(hk)])/2 and L factor with cot * tan.
        Cplx mf = (one + m_pow) * pow2(-1, wp);
        long m = mulmod(r % h, c.kbar, h);
        Real tn(wp);
        mpfr_tan(tn.v, (pi * r / (h * k)).v, MPFR_RNDN);
        Real lf = 1 - c.cot[m - 1] * tn;
        rhs_ml = rhs_ml * (mf * lf);
      }
    }
    Cplx rhs = c.base[r % h] * ((rhs_ml * p_factor) * h_pow);
    defects.push_back(abs(lhs * recip(rhs) - one).rounded_to(prec));
  }
  return defects;
}

Real verify_thp_decomposition(long h, long k, long r, mpfr_prec_t prec) {
  require(0 <= r && r < k, Status::Invalid, "need 0 <= r < k");
  ThpContext c(h, k, prec);
  const mpfr_prec_t wp = c.wp;
  const Real pi = const_pi(wp);
  const Cplx one = Cplx::of_long(1, wp);

  Cplx lhs = one, pm = one, ml = one;
  Cplx lhs_pow = one, p_pow = one, m_pow = one;
  for (long n = 1; n <= r; ++n) {
    lhs_pow = lhs_pow * c.lhs_root;
    lhs = lhs * (one - lhs_pow);
    m_pow = m_pow * c.m_root;
    if (n % h == 0) {
      p_pow = p_pow * c.p_root;
      pm = pm * (one - p_pow);
    } else {
      Cplx mf = (one + m_pow) * pow2(-1, wp);
      long m = mulmod(n % h, c.kbar, h);
      Real tn(wp);
      mpfr_tan(tn.v, (pi * n / (h * k)).v, MPFR_RNDN);
      ml = ml * (mf * (1 - c.cot[m - 1] * tn));
    }
  }
  Real h_pow(wp);
  mpfr_ui_pow_ui(h_pow.v, h, r / h, MPFR_RNDN);
  Cplx rhs = c.base[r % h] * ((pm * ml) * h_pow);
  return abs(lhs * recip(rhs) - one).rounded_to(prec);
}

Real thp_main_terms(long h, long k, long r, mpfr_prec_t prec) {
  require(1 <= r && r < k, Status::Invalid, "need 1 <= r < k");
  const mpfr_prec_t wp = prec + 32;
  require(4 <= h && h < k && std::gcd(h, k) == 1, Status::Invalid,
          "need 4 <= h < k with gcd(h, k) = 1");
  const long kbar = mod_inverse(k % h, h);
  const long r0 = r % h;
  const Real pi = const_pi(wp);

  // c = (kbar k - 1)/h turns the n-th factor angle into (n c mod k)/k.
  const long cm = ((static_cast<long long>(kbar) * k - 1) / h) % k;
  Cplx log_lhs(wp);
  long a = 0;
  for (long n = 1; n <= r; ++n) {
    a += cm;
    if (a >= k) a -= k;
    log_lhs += f_log1me(Rat(a, k), wp);
  }
  long b = 0;
  for (long n = 1; n <= r0; ++n) {
    b += kbar;
    if (b >= h) b -= h;
    log_lhs -= f_log1me(Rat(b, h), wp);
  }
  log_lhs -= Cplx(Real(wp), pi * (Rat(h, 12 * k) + Rat(k, 12 * h)).to_real(wp));

  Cplx main = lie(Rat(r, k), wp) * Rat(k, h).to_real(wp);
  Real cot_part(wp);
  b = 0;
  for (long n = 1; n <= r0; ++n) {
    b += kbar;
    if (b >= h) b -= h;
    long mm = std::min(b, h - b);
    Real ct(wp);
    mpfr_cot(ct.v, (pi * mm / h).v, MPFR_RNDN);
    if (mm != b) ct = -ct;
    cot_part += ct * n / h;
  }
  Real adjust = (pi / k) * (cot_part - Real::of_long(r / h, wp) *
                                           cotangent_sum_c0(kbar, h, wp));
  return abs(log_lhs - main + Cplx::of_real(adjust)).rounded_to(prec);
}

std::pair<Real, Real> reciprocity_H(long h, long k, mpfr_prec_t prec) {
  require(1 <= h && h <= k && std::gcd(h, k) == 1, Status::Invalid,
          "need 1 <= h <= k coprime");
  require(k > 1, Status::Invalid, "h = k = 1 is degenerate");
  const mpfr_prec_t wp = prec + 32;
  const long hbar = mod_inverse(h % k, k);
  const long kbar = h == 1 ? 0 : mod_inverse(k % h, h);

  Real lj1 = log(kashaev_41(Rat(hbar, k), wp));
  Real lj2 = log(kashaev_41(Rat(kbar, std::max(h, 1L)), wp));
  Real vol2pi = 3 * lobachevsky(Rat(1, 3), wp);
  Real gap = lj1 - lj2 - vol2pi * Rat(k, h).to_real(wp);

  Real cotmax = h >= 2 ? cot_partial_max(h, k, wp) : Real(wp);
  Real c0 = cotangent_sum_c0(kbar, std::max(h, 1L), wp);
  Real bound = cotmax / k + abs(c0) / h + log(Rat(k, h).to_real(wp)) +
               Rat(k, h * h).to_real(wp);
  return {gap.rounded_to(prec), bound.rounded_to(prec)};
}

Real th4_check(long h, long k, mpfr_prec_t prec) {
  require(1 <= h && h <= k && std::gcd(h, k) == 1, Status::Invalid,
          "need 1 <= h <= k coprime");
  require(k > 1, Status::Invalid, "h = k = 1 is degenerate");
  const mpfr_prec_t wp = prec + 32;
  const long hbar = mod_inverse(h % k, k);
  const long kbar = h == 1 ? 0 : mod_inverse(k % h, h);
  Real c0 = cotangent_sum_c0(kbar, std::max(h, 1L), wp);
  require(c0.sgn() < 0, Status::Invalid, "th4_check needs c0(kbar/h) < 0");

  Real lj1 = log(kashaev_41(Rat(hbar, k), wp));
  Real lj2 = log(kashaev_41(Rat(kbar, std::max(h, 1L)), wp));
  Real residual = lj1 - lj2 + (2 * const_pi(wp) / h) * c0;
  Real cotmax = h >= 2 ? cot_partial_max(h, k, wp) : Real(wp);
  Real envelope = Rat(k, h).to_real(wp) + cotmax / k;
  return (residual / envelope).rounded_to(prec);
}

namespace {

Cplx knot_value(const KnotPreset& K, const Rat& x, mpfr_prec_t wp) {
  if (K.name == "4_1") return Cplx::of_real(kashaev_41(x, wp));
  return kashaev_eval(K, x, wp);
}

// Neville extrapolation to u = 0 through (u_i, q_i).
Cplx neville_limit(const std::vector<Real>& u, std::vector<Cplx> q) {
  const size_t n = u.size();
  for (size_t lvl = 1; lvl < n; ++lvl)
    for (size_t i = 0; i + lvl < n; ++i) {
      Real denom = u[i] - u[i + lvl];
      q[i] = (q[i + 1] * u[i] - q[i] * u[i + lvl]) * recip(Cplx::of_real(denom));
    }
  return q[0];
}

// tau with Im > 0 solving tau^3 - tau + 1 = 0, by Newton from the
// double-precision root.
Cplx trace_field_root(mpfr_prec_t wp) {
  Cplx t(Rat(6624, 10000).to_real(wp), Rat(5623, 10000).to_real(wp));
  const Cplx one = Cplx::of_long(1, wp);
  for (int i = 0; i < 64; ++i) {
    Cplx f = t * t * t - t + one;
    if (abs(f) < pow2(-wp + 4, wp)) break;
    Cplx df = t * t * 3 - one;
    t -= f * recip(df);
  }
  return t;
}

} // namespace

AsymptoticFit extract_constant(const KnotPreset& K, long a, long b, long c,
                               long d, long den,
                               const std::vector<long>& n_list,
                               mpfr_prec_t prec) {
  require(a * d - b * c == 1, Status::Invalid, "gamma must have determinant 1");
  require(c != 0, Status::Invalid, "gamma(inf) must be finite");
  require(den >= 1 && !n_list.empty(), Status::Invalid,
          "need a positive denominator and at least one sample");

  const mpfr_prec_t wp = prec + 32;
  AsymptoticFit fit;
  fit.knot = K.name;
  fit.a = a;
  fit.b = b;
  fit.c = c;
  fit.d = d;
  fit.den = den;
  fit.samples = n_list;

  auto [vol, cs] = vol_cs(K, wp);
  const Real two_pi = 2 * const_pi(wp);
  const Rat ginv_inf(-d, c);

  std::vector<Real> u;
  for (long n : n_list) {
    require(std::gcd(n, den) == 1, Status::Invalid,
            "samples must be coprime to the denominator");
    Rat x(n, den);
    Rat gx(a * n + b * den, c * n + d * den);
    Cplx jtop = knot_value(K, gx, wp);
    Cplx jbot = knot_value(K, x, wp);
    require(abs2(jbot).sgn() > 0, Status::Invalid,
            "denominator invariant vanished");

    Real t = (x - ginv_inf).to_real(wp);  // hbar = 2 pi i / t
    Cplx pref = cpow(Cplx(Real(wp), 1 / t), Rat(3, 2).to_real(wp));
    Cplx decay = cexp(Cplx(-(vol * t) / two_pi, (cs * t) / two_pi));
    Cplx q = (jtop * recip(jbot)) * pref * decay;
    fit.q_values.push_back(Cplx(q.re.rounded_to(prec), q.im.rounded_to(prec)));
    u.push_back(1 / t);
  }

  // Richardson order 2: extrapolate through the last (up to) three samples.
  size_t take = std::min<size_t>(3, u.size());
  std::vector<Real> uu(u.end() - take, u.end());
  std::vector<Cplx> qq(fit.q_values.end() - take, fit.q_values.end());
  Cplx lim = neville_limit(uu, qq);
  fit.extracted = Cplx(lim.re.rounded_to(prec), lim.im.rounded_to(prec));

  if (K.name == "4_1" || K.name == "5_2") {
    long g = std::gcd(std::abs(a), std::abs(c));
    (void)g;  // det 1 already forces gcd(a, c) = 1
    fit.reference = closed_form_CD(K.name, Rat(a, c), prec);
    fit.has_reference = true;
  }
  return fit;
}

Cplx closed_form_CD(const std::string& knot, const Fraction& alpha,
                    mpfr_prec_t prec) {
  const mpfr_prec_t wp = prec + 32;
  const Rat al = alpha.frac();
  const long c = al.den_long();
  const long p = al.num_long();
  const Cplx one = Cplx::of_long(1, wp);

  if (knot == "4_1") {
    // Lambda^{1/c} = (prod_g |w_g|^{2g/c}) sum_{r<=c} prod_{g<=r} |w_g|^2,
    // w_g = 1 - e(g alpha - 5/(6c)).
    std::vector<Real> w2;
    Real logprod(wp);
    for (long g = 1; g <= c; ++g) {
      Cplx w = one - root_of_unity(Rat(6 * g * p - 5, 6 * c), wp);
      Real a2 = abs2(w);
      w2.push_back(a2);
      logprod += log(a2) * Rat(g, c).to_real(wp);
    }
    Real sum(wp), run = Real::of_long(1, wp);
    for (long r = 1; r <= c; ++r) {
      run *= w2[r - 1];
      sum += run;
    }
    Real lam = exp(logprod) * sum;
    Real s3(wp);
    mpfr_sqrt_ui(s3.v, 3, MPFR_RNDN);
    Cplx delta_pow = cpow(Cplx(Real(wp), s3), Rat(-1, 2).to_real(wp));
    Cplx out = delta_pow * (lam * Real::of_long(c, wp));
    return Cplx(out.re.rounded_to(prec), out.im.rounded_to(prec));
  }

  require(knot == "5_2", Status::Invalid,
          "closed forms exist only for 4_1 and 5_2");

  const KnotPreset& K = knot_preset("5_2");
  SaddleState st = solve_critical(K, K.seed(wp), wp);
  const Cplx mu1 = st.mu[0], mu2 = st.mu[1];
  const Cplx tau = trace_field_root(wp);
  const Real cinv = Rat(1, c).to_real(wp);

  std::vector<Cplx> winv, xinv2;  // w_g^{-1} and x_g^{-2}
  Cplx logpref(wp);
  for (long g = 1; g <= c; ++g) {
    Cplx w = one - e2pi(mu1 * cinv - Cplx::of_real(Rat(g * p, c).to_real(wp)), wp);
    Cplx x = one - e2pi(Cplx::of_real(Rat(g * p, c).to_real(wp)) - mu2 * cinv, wp);
    winv.push_back(recip(w));
    xinv2.push_back(recip(x * x));
    logpref -= (clog(w) + clog(x) * 2) * Rat(g, c).to_real(wp);
  }

  Cplx sum(wp);
  Cplx run1 = one;
  for (long r1 = 1; r1 <= c; ++r1) {
    run1 = run1 * winv[r1 - 1];
    Cplx run2 = one;
    for (long r2 = 1; r2 <= c; ++r2) {
      run2 = run2 * xinv2[r2 - 1];
      // e(mu1 (r1+r2)/c + mu2 r1/c + r1/2 - (alpha/2) r1 (1 + r1 + 2 r2))
      Cplx ang = (mu1 * Real::of_long(r1 + r2, wp) +
                  mu2 * Real::of_long(r1, wp)) *
                 cinv;
      ang += Cplx::of_real(Rat(r1, 2).to_real(wp));
      ang -= Cplx::of_real(
          (al * Rat(r1 * (1 + r1 + 2 * r2), 2)).to_real(wp));
      sum += e2pi(ang, wp) * (run1 * run2);
    }
  }

  Cplx lam = e2pi(mu1 * Rat(c + 1, 2 * c).to_real(wp), wp) * cexp(logpref) * sum;
  Cplx delta = tau * 3 - (tau * tau) * 2;
  Cplx out = root_of_unity(dedekind_sum(p, c) * Rat(1, 2), wp) *
             cpow(delta, Rat(-1, 2).to_real(wp)) * lam;
  Real sc(wp);
  mpfr_sqrt_ui(sc.v, static_cast<unsigned long>(c), MPFR_RNDN);
  out *= sc;
  return Cplx(out.re.rounded_to(prec), out.im.rounded_to(prec));
}

Cplx congruence_sum(const KnotPreset& K, const std::vector<long>& s, long p,
                    long q, const std::vector<Cplx>& mu, mpfr_prec_t prec) {
  require(q >= 1, Status::Invalid, "q must be positive");
  require(static_cast<int>(s.size()) == K.m &&
              static_cast<int>(mu.size()) == K.m,
          Status::Invalid, "congruence_sum: wrong vector sizes");
  const long pm = ((p % q) + q) % q;
  require(std::gcd(pm == 0 ? q : pm, q) == 1, Status::Invalid,
          "need gcd(p, q) = 1");
  const long pbar = q == 1 ? 0 : mod_inverse(pm, q);
  const mpfr_prec_t wp = prec + 16;
  const Cplx one = Cplx::of_long(1, wp);

  Cplx total(wp);
  for (const auto& slot : K.slots) {
    long ls = 0;
    Cplx lm(wp);
    for (int u = 0; u < K.m; ++u) {
      ls += slot.c[u] * s[u];
      if (slot.c[u] == 1) lm += mu[u];
      if (slot.c[u] == -1) lm -= mu[u];
    }
    for (long g = 1; g <= q; ++g) {
      // <g pbar - ell(s)> in [1, q]
      long v = (g * pbar - ls) % q;
      long rep = ((v - 1) % q + q) % q + 1;
      Real b1 = Rat(2 * rep - q, 2 * q).to_real(wp);
      Cplx u = (Cplx::of_long(g, wp) - lm) * Rat(1, q).to_real(wp);
      require(u.re.sgn() > 0 && u.re < Real::of_long(1, wp), Status::Invalid,
              "congruence_sum: argument left the strip");
      Cplx psi = (slot.kind == 0 || slot.kind == 2) ? f_log1me(u)
                                                    : f_log1me(one - u);
      if (slot.kind >= 2) psi = -psi;
      total += psi * b1;
    }
  }
  return Cplx(total.re.rounded_to(prec), total.im.rounded_to(prec));
}

}  // namespace qk
