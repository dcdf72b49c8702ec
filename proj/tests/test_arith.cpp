#include <cmath>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qknot/rat.hpp"
#include "qknot/real.hpp"

using namespace qk;

TEST_CASE("real promotion and factories") {
  Real a = Real::of_long(3, 128);
  Real b = Real::of_double(0.5, 256);
  CHECK(a.prec() == 128);
  CHECK((a + b).prec() == 256);
  CHECK((a * b).prec() == 256);
  CHECK(Real::of_double(0.5, 64) * 2L == Real::of_long(1, 64));
  CHECK((2L - Real::of_long(1, 64)) == Real::of_long(1, 64));
}

TEST_CASE("real decimal and hex round trips") {
  std::vector<double> samples = {1.0,      -1.0,        0.3333333333333333,
                                 1e-30,    -6.25e11,    123456.75,
                                 0.015625, -3.0517578125e-05};
  for (double d : samples) {
    Real x = Real::of_double(d, 192);
    Real y = exp(sin(x));  // something with a full mantissa
    Real back = Real::parse_hex(y.hex_string(), 192);
    CHECK(back == y);
  }
  CHECK(Real::parse_hex(Real(192).hex_string(), 192).is_zero());
  CHECK_THROWS_AS(Real::parse_hex("zz", 64), Error);
  CHECK_THROWS_AS(Real::parse_hex("1.5p+2 trailing", 64), Error);
  // dec_string honours the digit request
  Real third = Real::of_long(1, 192) / 3L;
  CHECK(third.dec_string(16) == "0.3333333333333333");
}

TEST_CASE("error carries its status") {
  try {
    require(false, Status::Cap, "boom");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.status == Status::Cap);
    CHECK(std::string(e.what()) == "boom");
  }
}

TEST_CASE("int cap on machine conversion") {
  Int big = 1L << 62;
  big = big * Int(1L << 62);  // 2^124
  CHECK(!big.fits_long());
  CHECK_THROWS_AS(big.to_long(), Error);
  CHECK(Int(-7).to_long() == -7);
}

TEST_CASE("rat canonical form and parsing") {
  CHECK(Rat(6, 8) == Rat(3, 4));
  CHECK(Rat(-6, 8) == Rat(-3, 4));
  CHECK(Rat(3, -4) == Rat(-3, 4));
  CHECK(Rat(5, 1).floor().to_long() == 5);
  CHECK(Rat(-7, 2).floor().to_long() == -4);
  CHECK(Rat(-7, 2).frac() == Rat(1, 2));
  CHECK(Rat::parse("3/7") == Rat(3, 7));
  CHECK(Rat::parse("2") == Rat(2, 1));
  CHECK(Rat::parse("6/8") == Rat(3, 4));
  CHECK_THROWS_AS(Rat::parse("3/"), Error);
  CHECK_THROWS_AS(Rat::parse("a/b"), Error);
  CHECK_THROWS_AS(Rat::parse("1/0"), Error);
  CHECK(Rat(3, 7).str() == "3/7");
  CHECK(Rat(1, 3).to_real(64) > Real::of_double(0.333333, 64));
}

TEST_CASE("continued fraction canonical expansion") {
  ContinuedFraction cf = cf_expand(Rat(7, 17));
  REQUIRE(cf.r() == 3);
  CHECK(cf.b[0].to_long() == 2);
  CHECK(cf.b[1].to_long() == 2);
  CHECK(cf.b[2].to_long() == 3);
  CHECK(cf.str() == "[0;2,2,3]");

  auto sr = sigma_r(Rat(8, 13));
  CHECK(sr.first.to_long() == 6);
  CHECK(sr.second == 5);

  // alpha = 0 expands to the empty word
  CHECK(cf_expand(Rat(0, 1)).r() == 0);
}

TEST_CASE("continued fraction matches plain Euclid on a sweep") {
  for (long k = 2; k <= 60; ++k) {
    for (long h = 1; h < k; ++h) {
      if (std::gcd(h, k) != 1) continue;
      std::vector<long> qts = oracle::cf_quotients(h, k);
      auto conv = oracle::cf_convergents(qts);
      ContinuedFraction cf = cf_expand(Rat(h, k));
      REQUIRE(cf.r() + 1 == static_cast<long>(qts.size()));
      long sigma = 0;
      for (long s = 1; s < static_cast<long>(qts.size()); ++s) {
        CHECK(cf.b[static_cast<size_t>(s - 1)].to_long() == qts[static_cast<size_t>(s)]);
        sigma += qts[static_cast<size_t>(s)];
      }
      CHECK(cf.sigma.to_long() == sigma);
      for (long s = 0; s < static_cast<long>(conv.size()); ++s) {
        CHECK(cf.u[static_cast<size_t>(s)].to_long() == conv[static_cast<size_t>(s)].first);
        CHECK(cf.v[static_cast<size_t>(s)].to_long() == conv[static_cast<size_t>(s)].second);
      }
    }
  }
}

TEST_CASE("convergent identities") {
  for (long k : {17L, 89L, 144L, 200L}) {
    for (long h = 1; h < k; ++h) {
      if (std::gcd(h, k) != 1) continue;
      ContinuedFraction cf = cf_expand(Rat(h, k));
      long r = cf.r();
      REQUIRE(static_cast<long>(cf.u.size()) == r + 1);
      // determinant alternates; the recurrence rebuilds each convergent
      for (long s = 1; s <= r; ++s) {
        Int det = cf.u[static_cast<size_t>(s)] * cf.v[static_cast<size_t>(s - 1)] -
                  cf.u[static_cast<size_t>(s - 1)] * cf.v[static_cast<size_t>(s)];
        CHECK(det.to_long() == (s % 2 == 0 ? -1 : 1));
      }
      for (long s = 2; s <= r; ++s) {
        Int ru = cf.b[static_cast<size_t>(s - 1)] * cf.u[static_cast<size_t>(s - 1)] +
                 cf.u[static_cast<size_t>(s - 2)];
        Int rv = cf.b[static_cast<size_t>(s - 1)] * cf.v[static_cast<size_t>(s - 1)] +
                 cf.v[static_cast<size_t>(s - 2)];
        CHECK(ru == cf.u[static_cast<size_t>(s)]);
        CHECK(rv == cf.v[static_cast<size_t>(s)]);
      }
      // denominators at least double every two steps
      for (long s = 0; s + 2 <= r; ++s) {
        Int twice = Int(2) * cf.v[static_cast<size_t>(s)];
        CHECK(twice <= cf.v[static_cast<size_t>(s + 2)]);
      }
      // last convergent reproduces the input exactly
      CHECK(Rat(cf.u[static_cast<size_t>(r)], cf.v[static_cast<size_t>(r)]) == Rat(h, k));
    }
  }
}

TEST_CASE("dedekind sums") {
  CHECK(dedekind_sum(1, 3) == Rat(1, 18));
  CHECK(dedekind_sum(1, 1) == Rat(0));
  CHECK(dedekind_sum(1, 2) == Rat(0));

  for (long q = 1; q <= 40; ++q) {
    for (long p = 1; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      Rat s = dedekind_sum(p, q);
      CHECK(s == oracle::dedekind(p, q));
      // 6q s(p,q) is an integer
      Rat scaled = Rat(6 * q, 1) * s;
      CHECK(scaled.den() == Int(1));
      // reciprocity against the mirrored sum
      if (p < q) {
        Rat lhs = s + dedekind_sum(q, p);
        Rat rhs = Rat(-1, 4) + (Rat(p, q) + Rat(q, p) + Rat(1, p * q)) / Rat(12, 1);
        CHECK(lhs == rhs);
      }
      // periodicity in p
      CHECK(dedekind_sum(p + q, q) == s);
    }
  }
}

TEST_CASE("modular inverse") {
  for (long m = 2; m <= 50; ++m) {
    for (long a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      long inv = mod_inverse(a, m);
      CHECK(inv >= 1);
      CHECK(inv < m);
      CHECK((a * inv) % m == 1);
    }
  }
  CHECK(mod_inverse(1, 2) == 1);
  CHECK_THROWS_AS(mod_inverse(2, 4), Error);
}

TEST_CASE("modular setup implements the moebius action") {
  // gamma = (p, -qbar; q, pbar) applied to x = N/d
  struct Case {
    long p, q, pbar, qbar, N, d;
  };
  std::vector<Case> cases = {
      {0, 1, 1, 1, 20, 1}, {1, 2, 1, 0, 5, 1},  {2, 5, 3, -1, 7, 2},
      {1, 3, 1, 0, 11, 2}, {3, 5, 2, -1, 9, 1}, {1, 1, 1, 0, 30, 7}};
  for (const Case& c : cases) {
    REQUIRE(c.p * c.pbar + c.q * c.qbar == 1);
    ModularSetup s = modular_setup(c.p, c.q, c.pbar, c.qbar, c.N, c.d);
    CHECK(s.h == c.N * c.p - c.d * c.qbar);
    CHECK(s.k == c.N * c.q + c.d * c.pbar);
    CHECK(s.x == Rat(c.N, c.d));
    CHECK(s.gx == Rat(s.h, s.k));
    CHECK(s.kappa == Rat(c.d, s.k));
    // the published pair really is gamma x
    Rat x(c.N, c.d);
    Rat gx = (Rat(c.p, 1) * x - Rat(c.qbar, 1)) / (Rat(c.q, 1) * x + Rat(c.pbar, 1));
    CHECK(s.gx == gx);
  }
  // determinant must be 1
  CHECK_THROWS_AS(modular_setup(1, 1, 2, 0, 5, 1), Error);
}
