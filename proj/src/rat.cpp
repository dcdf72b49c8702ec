#include "qknot/rat.hpp"

#include <numeric>
#include <sstream>

namespace qk {

Rat Rat::frac() const {
  Rat r(*this);
  Int fl = floor();
  mpz_submul(mpq_numref(r.q), fl.z, mpq_denref(r.q));  // {x} = x - floor(x), exact
  mpq_canonicalize(r.q);
  return r;
}

std::string Rat::str() const {
  if (is_integer()) return num().str();
  return num().str() + "/" + den().str();
}

Rat Rat::parse(const std::string& text) {
  Rat r;
  int rc = mpq_set_str(r.q, text.c_str(), 10);
  require(rc == 0, Status::Invalid, "bad fraction: " + text);
  require(mpz_sgn(mpq_denref(r.q)) != 0, Status::Invalid, "zero denominator: " + text);
  mpq_canonicalize(r.q);
  return r;
}

std::string ContinuedFraction::str() const {
  std::ostringstream os;
  os << "[0";
  for (size_t i = 0; i < b.size(); ++i) os << (i == 0 ? ';' : ',') << b[i].str();
  os << "]";
  return os.str();
}

ContinuedFraction cf_expand(const Fraction& alpha) {
  require(alpha.sgn() >= 0 && alpha < Rat(1), Status::Invalid,
          "continued fraction input must lie in [0,1)");
  ContinuedFraction cf;
  cf.sigma = Int(0);
  cf.u.push_back(Int(0));
  cf.v.push_back(Int(1));
  if (alpha.sgn() == 0) return cf;

  // Euclid on (num, den) of 1/alpha; canonical form (last quotient > 1) falls
  // out automatically for a reduced fraction in (0,1).
  Int a = alpha.den(), b = alpha.num();
  Int um1(1), vm1(0);  // u_{-1}/v_{-1} = 1/0
  while (b.sgn() != 0) {
    Int qt = fdiv(a, b);
    Int rm = fmod(a, b);
    cf.b.push_back(qt);
    cf.sigma = cf.sigma + qt;
    Int un = qt * cf.u.back() + um1;
    Int vn = qt * cf.v.back() + vm1;
    um1 = cf.u.back();
    vm1 = cf.v.back();
    cf.u.push_back(std::move(un));
    cf.v.push_back(std::move(vn));
    a = std::move(b);
    b = std::move(rm);
  }
  return cf;
}

std::pair<Int, long> sigma_r(const Fraction& alpha) {
  ContinuedFraction cf = cf_expand(alpha);
  return {cf.sigma, cf.r()};
}

Rat dedekind_sum(long p, long q) {
  require(q >= 1, Status::Invalid, "dedekind_sum needs q >= 1");
  Rat s(0);
  for (long n = 1; n < q; ++n) {
    Int pn = Int(p) * Int(n);  // exact even when p*n would overflow long
    Rat fr = Rat(pn, Int(q)).frac();
    if (fr.sgn() == 0) continue;  // sawtooth vanishes at integers
    s = s + Rat(n, q) * (fr - Rat(1, 2));
  }
  return s;
}

long mod_inverse(long a, long m) {
  require(m >= 2, Status::Invalid, "modulus must be >= 2");
  mpz_t az, mz, rz;
  mpz_init_set_si(az, a);
  mpz_init_set_si(mz, m);
  mpz_init(rz);
  int ok = mpz_invert(rz, az, mz);
  require(ok != 0, Status::Invalid, "no inverse: gcd(a,m) != 1");
  long r = mpz_get_si(rz);
  mpz_clears(az, mz, rz, nullptr);
  if (r <= 0) r += m;
  return r;
}

ModularSetup modular_setup(long p, long q, long pbar, long qbar, long N, long d) {
  require(q >= 1 && d >= 1 && N >= 1, Status::Invalid, "need q, d, N >= 1");
  require(p * pbar + q * qbar == 1, Status::Invalid,
          "determinant constraint p*pbar + q*qbar = 1 violated");
  require(std::gcd(N, d) == 1, Status::Invalid, "need gcd(N,d) = 1");
  ModularSetup ms;
  ms.p = p;
  ms.q = q;
  ms.pbar = pbar;
  ms.qbar = qbar;
  ms.N = N;
  ms.d = d;
  ms.h = N * p - d * qbar;
  ms.k = N * q + d * pbar;
  require(ms.k != 0, Status::Invalid, "k = Nq + d*pbar vanished");
  require(std::gcd(ms.h, ms.k) == 1, Status::Invalid, "h,k not coprime");
  ms.x = Fraction(N, d);
  ms.gx = Fraction(ms.h, ms.k);
  ms.kappa = Fraction(d, ms.k);
  return ms;
}

}  // namespace qk
