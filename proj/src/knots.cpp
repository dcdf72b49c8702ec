#include "qknot/knots.hpp"

#include "qknot/special.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace qk {
namespace {

using Slot = KnotPreset::Slot;

KnotPreset make_preset(const char* name, int m, std::array<int, 4> mi, int nu,
                       std::vector<Slot> slots) {
  KnotPreset k;
  k.name = name;
  k.m = m;
  k.mi = mi;
  k.nu = nu;
  k.slots = std::move(slots);
  return k;
}

// The ten presets.  Slot kinds: 0 plain bracket, 1 conjugated, 2 inverted,
// 3 conjugate-inverted; coefficient rows give ell(r) = sum_u c_u r_u.
const std::vector<KnotPreset>& table() {
  static const std::vector<KnotPreset> t = {
      make_preset("4_1", 1, {1, 1, 0, 0}, 0,
                  {{0, {1}}, //
                   {1, {1}}}),
      make_preset("5_2", 2, {0, 1, 2, 2}, 1,
                  {{1, {1, 1}},
                   {2, {1, 1}}, {2, {0, 1}},
                   {3, {0, 1}}, {3, {1, 0}}}),
      make_preset("6_1", 3, {0, 2, 3, 3}, 2,
                  {{1, {1, 1, 0}}, {1, {1, 1, 1}},
                   {2, {1, 0, 0}}, {2, {1, 1, 0}}, {2, {1, 1, 1}},
                   {3, {1, 0, 0}}, {3, {0, 1, 0}}, {3, {0, 0, 1}}}),
      make_preset("6_2", 3, {2, 1, 2, 3}, -2,
                  {{0, {1, 0, 0}}, {0, {0, 1, 1}},
                   {1, {1, 0, 0}},
                   {2, {0, 1, 0}}, {2, {0, 0, 1}},
                   {3, {0, 1, 0}}, {3, {1, -1, 0}}, {3, {0, 1, 1}}}),
      make_preset("6_3", 3, {1, 1, 3, 3}, 0,
                  {{0, {0, 1, 0}},
                   {1, {0, 1, 0}},
                   {2, {1, 0, 0}}, {2, {0, 0, 1}}, {2, {0, 1, -1}},
                   {3, {1, 0, 0}}, {3, {0, 0, 1}}, {3, {-1, 1, 0}}}),
      make_preset("7_3", 4, {2, 3, 3, 3}, 1,
                  {{0, {0, 1, 0, 0}}, {0, {-1, 1, 0, 0}},
                   {1, {0, 1, 0, 0}}, {1, {0, 1, -1, 0}}, {1, {0, 1, -1, -1}},
                   {2, {0, 1, -1, 0}}, {2, {0, 1, -1, -1}}, {2, {1, 0, 0, 0}},
                   {3, {-1, 1, 0, 0}}, {3, {0, 0, 1, 0}}, {3, {0, 0, 0, 1}}}),
      make_preset("7_4", 4, {3, 0, 4, 4}, -3,
                  {{0, {1, 1, 0, 0}}, {0, {0, 1, 1, 0}}, {0, {0, 0, 1, 1}},
                   {2, {1, 0, 0, 0}}, {2, {0, 1, 0, 0}}, {2, {0, 0, 1, 0}},
                   {2, {0, 0, 0, 1}},
                   {3, {1, 1, 0, 0}}, {3, {0, 0, 1, 1}}, {3, {0, 1, 0, 0}},
                   {3, {0, 0, 1, 0}}}),
      make_preset("7_5", 4, {2, 2, 3, 4}, -1,
                  {{0, {0, 0, 1, 0}}, {0, {0, 0, 1, -1}},
                   {1, {0, 0, 1, 0}}, {1, {0, 1, 0, 0}},
                   {2, {0, 1, 0, 0}}, {2, {1, 0, 0, 0}}, {2, {0, 0, 0, 1}},
                   {3, {0, 0, 1, -1}}, {3, {1, 0, 0, 0}}, {3, {-1, 1, 0, 0}},
                   {3, {0, -1, 1, 0}}}),
      make_preset("7_6", 4, {2, 1, 4, 4}, -1,
                  {{0, {0, 1, 0, 0}}, {0, {0, 0, 1, 1}},
                   {1, {0, 1, 1, 0}},
                   {2, {1, 0, 0, 0}}, {2, {-1, 1, 0, 0}}, {2, {0, 0, 1, 0}},
                   {2, {0, 0, 0, 1}},
                   {3, {0, 1, 0, 0}}, {3, {1, 0, 0, 0}}, {3, {0, 0, 1, 0}},
                   {3, {0, 0, 0, 1}}}),
      make_preset("7_7", 4, {2, 1, 4, 4}, -1,
                  {{0, {1, 1, 0, 0}}, {0, {0, 0, 1, 1}},
                   {1, {0, 1, 1, 0}},
                   {2, {1, 0, 0, 0}}, {2, {0, 1, 0, 0}}, {2, {0, 0, 1, 0}},
                   {2, {0, 0, 0, 1}},
                   {3, {1, 0, 0, 0}}, {3, {0, 1, 0, 0}}, {3, {0, 0, 1, 0}},
                   {3, {0, 0, 0, 1}}}),
  };
  return t;
}

long ell_value(const Slot& s, const long* r, int m) {
  long v = 0;
  for (int u = 0; u < m; ++u) v += s.c[u] * r[u];
  return v;
}

Cplx ell_form(const Slot& s, const std::vector<Cplx>& n, mpfr_prec_t wp) {
  Cplx v(wp);
  for (size_t u = 0; u < n.size(); ++u) {
    if (s.c[u] == 1)
      v += n[u];
    else if (s.c[u] == -1)
      v -= n[u];
  }
  return v;
}

mpfr_prec_t vec_prec(const std::vector<Cplx>& n) {
  mpfr_prec_t p = 64;
  for (const Cplx& z : n) p = std::max(p, z.prec());
  return p;
}

void check_strip(const Cplx& ell) {
  require(ell.re.sgn() > 0 && ell.re < Real::of_long(1, ell.prec()),
          Status::Invalid, "linear form left the strip 0 < Re < 1");
}

} // namespace

long KnotPreset::cap() const {
  switch (m) {
    case 1: return 200000;
    case 2: return 1500;
    case 3: return 400;
    default: return 120;
  }
}

std::vector<Cplx> KnotPreset::seed(mpfr_prec_t prec) const {
  auto at = [&](long nre, long nim) {
    return Cplx(Rat(nre, 1000).to_real(prec), Rat(nim, 1000).to_real(prec));
  };
  if (name == "4_1") return {at(800, 0)};
  if (name == "5_2") return {at(224, 45), at(164, -67)};
  return {};
}

const KnotPreset& knot_preset(const std::string& name) {
  for (const KnotPreset& k : table())
    if (k.name == name) return k;
  throw Error(Status::Invalid, "unknown knot name: " + name);
}

const std::vector<std::string>& knot_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const KnotPreset& k : table()) v.push_back(k.name);
    return v;
  }();
  return names;
}

Cplx kashaev_eval(const KnotPreset& K, const Fraction& x, mpfr_prec_t prec,
                  int threads) {
  const Rat xr = x.frac();
  const long k = xr.den().to_long();
  require(k <= K.cap(), Status::Cap,
          "denominator exceeds the cap for " + K.name);
  if (k == 1) return Cplx::of_long(1, prec);

  const mpfr_prec_t wp = prec + 48;
  const int m = K.m;

  // Bracket tables: prefix Pochhammer products and, when an inverted kind is
  // present, their reciprocals; conjugates stored separately so the inner
  // loop only multiplies.
  std::vector<Cplx> tab[4];
  {
    std::vector<Cplx> pref = pochhammer_prefix(xr, k - 1, wp);
    bool need[4] = {};
    for (const Slot& s : K.slots) need[s.kind] = true;
    if (need[2] || need[3]) {
      std::vector<Cplx>& inv = tab[2];
      inv.reserve(k);
      for (long n = 0; n < k; ++n) inv.push_back(recip(pref[n]));
      if (need[3]) {
        tab[3].reserve(k);
        for (long n = 0; n < k; ++n) tab[3].push_back(conj(inv[n]));
      }
      if (!need[2]) tab[2].clear();
    }
    if (need[1]) {
      tab[1].reserve(k);
      for (long n = 0; n < k; ++n) tab[1].push_back(conj(pref[n]));
    }
    if (need[0]) tab[0] = std::move(pref);
  }

  // Slots grouped by the deepest variable they read, so each partial product
  // is formed once per loop level and out-of-range forms prune whole
  // subtrees.
  std::vector<std::vector<const Slot*>> by_depth(m);
  for (const Slot& s : K.slots) {
    int deep = 0;
    for (int u = 0; u < m; ++u)
      if (s.c[u] != 0) deep = u;
    by_depth[deep].push_back(&s);
  }

  const long bs = m == 1 ? 4096 : 4;  // fixed block size on r_1
  const long nblocks = (k + bs - 1) / bs;
  std::vector<Cplx> blocks(nblocks, Cplx(wp));
  std::atomic<long> next{0};
  std::exception_ptr fail;
  std::mutex fail_mx;

  auto worker = [&]() {
    try {
      long r[4] = {0, 0, 0, 0};
      // One term stack per worker; level 0 partials live in `partial[d]`.
      std::vector<Cplx> partial(m + 1, Cplx(wp));
      for (;;) {
        long bi = next.fetch_add(1);
        if (bi >= nblocks) break;
        Cplx acc(wp);
        long lo = bi * bs, hi = std::min(k, lo + bs);
        // Depth-first sweep of r_1 in [lo, hi), r_2..r_m in [0, k).
        auto sweep = [&](auto&& self, int d) -> void {
          long from = d == 0 ? lo : 0, to = d == 0 ? hi : k;
          for (long v = from; v < to; ++v) {
            r[d] = v;
            Cplx term = d == 0 ? Cplx::of_long(1, wp) : partial[d - 1];
            bool ok = true;
            for (const Slot* s : by_depth[d]) {
              long e = ell_value(*s, r, m);
              if (e < 0 || e >= k) {
                ok = false;
                break;
              }
              term = term * tab[s->kind][e];
            }
            if (!ok) continue;
            if (d == m - 1) {
              acc += term;
            } else {
              partial[d] = term;
              self(self, d + 1);
            }
          }
        };
        sweep(sweep, 0);
        blocks[bi] = acc;
      }
    } catch (...) {
      std::lock_guard<std::mutex> g(fail_mx);
      if (!fail) fail = std::current_exception();
    }
  };

  int t = std::clamp(threads, 1, 64);
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < t; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (fail) std::rethrow_exception(fail);

  Cplx sum(wp);
  for (const Cplx& b : blocks) sum += b;

  // k^iota and the per-bracket k^{-1/2} factors combine to the integer power
  // k^{m + 1 - m_1 - m_2}.
  long e = m + 1 - K.mi[0] - K.mi[1];
  Real scale = Real::of_long(k, wp);
  Real factor(wp);
  mpfr_pow_si(factor.v, scale.v, e, MPFR_RNDN);
  sum *= factor;
  return Cplx(sum.re.rounded_to(prec), sum.im.rounded_to(prec));
}

Real kashaev_41(const Fraction& q_arg, mpfr_prec_t prec) {
  const Rat xr = q_arg.frac();
  const long k = xr.den().to_long();
  const mpfr_prec_t wp = prec + 64;
  if (k == 1) return Real::of_long(1, prec);
  Cplx e0 = root_of_unity(xr, wp);
  Cplx w = e0;          // e(n h / k)
  Cplx p = Cplx::of_long(1, wp);  // (e(h/k))_n
  Real s = Real::of_long(1, wp);  // n = 0 term
  for (long n = 1; n < k; ++n) {
    p = p * Cplx(1 - w.re, -w.im);
    s += abs2(p);
    if (n + 1 < k) w = w * e0;
  }
  return s.rounded_to(prec);
}

Cplx potential(const KnotPreset& K, const std::vector<Cplx>& n) {
  require(static_cast<int>(n.size()) == K.m, Status::Invalid,
          "potential: wrong variable count");
  const mpfr_prec_t wp = vec_prec(n) + 32;
  const Real pi = const_pi(wp);
  Cplx shift(Real(wp), pi / 12);  // pi i / 12
  Cplx sum(wp);
  for (const Slot& s : K.slots) {
    Cplx ell = ell_form(s, n, wp);
    check_strip(ell);
    Cplx arg = (s.kind == 0 || s.kind == 2) ? ell : Cplx::of_long(1, wp) - ell;
    Cplx term = lie(arg, wp) + shift;
    if (s.kind == 0 || s.kind == 3)
      sum += term;
    else
      sum -= term;
  }
  return sum;
}

std::vector<Cplx> potential_gradient(const KnotPreset& K,
                                     const std::vector<Cplx>& n) {
  require(static_cast<int>(n.size()) == K.m, Status::Invalid,
          "potential_gradient: wrong variable count");
  const mpfr_prec_t wp = vec_prec(n) + 32;
  std::vector<Cplx> g(K.m, Cplx(wp));
  for (const Slot& s : K.slots) {
    Cplx ell = ell_form(s, n, wp);
    check_strip(ell);
    // psi_i at 1 - ell: f, f(1-.), -f, -f(1-.) for kinds 0..3.
    Cplx val = (s.kind == 0 || s.kind == 2)
                   ? f_log1me(Cplx::of_long(1, wp) - ell)
                   : f_log1me(ell);
    if (s.kind >= 2) val = -val;
    for (int u = 0; u < K.m; ++u) {
      if (s.c[u] == 1)
        g[u] += val;
      else if (s.c[u] == -1)
        g[u] -= val;
    }
  }
  return g;
}

std::vector<std::vector<Cplx>> potential_hessian(const KnotPreset& K,
                                                 const std::vector<Cplx>& n) {
  require(static_cast<int>(n.size()) == K.m, Status::Invalid,
          "potential_hessian: wrong variable count");
  const mpfr_prec_t wp = vec_prec(n) + 32;
  std::vector<std::vector<Cplx>> h(K.m, std::vector<Cplx>(K.m, Cplx(wp)));
  for (const Slot& s : K.slots) {
    Cplx ell = ell_form(s, n, wp);
    check_strip(ell);
    Cplx d = (s.kind == 0 || s.kind == 2)
                 ? f_derivative(1, Cplx::of_long(1, wp) - ell)
                 : f_derivative(1, ell);
    if (s.kind == 0 || s.kind == 3) d = -d;
    for (int u = 0; u < K.m; ++u)
      for (int w = 0; w < K.m; ++w) {
        int c = s.c[u] * s.c[w];
        if (c == 1)
          h[u][w] += d;
        else if (c == -1)
          h[u][w] -= d;
      }
  }
  return h;
}

WBoundResult w_bound_check(const KnotPreset& K, const Rat& grid_step) {
  require(grid_step.sgn() > 0 && grid_step <= Rat(1, 16), Status::Invalid,
          "w_bound_check: grid step must lie in (0, 1/16]");
  require(grid_step.num() == Int(1), Status::Invalid,
          "w_bound_check: grid step must be 1/g");
  const long g = grid_step.den().to_long();
  const mpfr_prec_t wp = 128;
  std::vector<Real> lat = lobachevsky_lattice(g, wp);
  std::vector<double> latd(g);
  for (long j = 0; j < g; ++j) latd[j] = lat[j].to_double();

  WBoundResult out{Real(wp), false, {}};
  mpfr_set_inf(out.sup.v, -1);
  const int m = K.m;
  long a[4] = {0, 0, 0, 0};
  double best = -1e300;
  long besta[4] = {0, 0, 0, 0};
  for (;;) {
    bool outside = false;
    double w = 0;
    for (const Slot& s : K.slots) {
      long v = ell_value(s, a, m);
      if (v < 0 || v >= g) outside = true;
      long j = ((v % g) + g) % g;
      w += (s.kind <= 1) ? -latd[j] : latd[j];
    }
    if (outside && w > best) {
      best = w;
      for (int u = 0; u < m; ++u) besta[u] = a[u];
      out.region_nonempty = true;
    }
    int d = m - 1;
    while (d >= 0 && ++a[d] == g) a[d--] = 0;
    if (d < 0) break;
  }
  if (out.region_nonempty) {
    Real sup(wp);
    for (const Slot& s : K.slots) {
      long v = ell_value(s, besta, m);
      long j = ((v % g) + g) % g;
      if (s.kind <= 1)
        sup -= lat[j];
      else
        sup += lat[j];
    }
    out.sup = sup;
    for (int u = 0; u < m; ++u) out.certificate.emplace_back(besta[u], g);
  }
  return out;
}

namespace {

// Solve H x = b in place by Gaussian elimination with partial pivoting;
// returns det(H) as the pivot product.
Cplx solve_linear(std::vector<std::vector<Cplx>> h, std::vector<Cplx>& b) {
  const int m = static_cast<int>(b.size());
  const mpfr_prec_t wp = b[0].prec();
  Cplx det = Cplx::of_long(1, wp);
  for (int col = 0; col < m; ++col) {
    int piv = col;
    Real mag = abs2(h[col][col]);
    for (int rrow = col + 1; rrow < m; ++rrow) {
      Real cand = abs2(h[rrow][col]);
      if (mag < cand) {
        mag = cand;
        piv = rrow;
      }
    }
    require(mag.sgn() > 0, Status::Invalid, "singular Hessian");
    if (piv != col) {
      std::swap(h[piv], h[col]);
      std::swap(b[piv], b[col]);
      det = -det;
    }
    det = det * h[col][col];
    Cplx inv = recip(h[col][col]);
    for (int rrow = col + 1; rrow < m; ++rrow) {
      Cplx f = h[rrow][col] * inv;
      for (int cc = col; cc < m; ++cc) h[rrow][cc] -= f * h[col][cc];
      b[rrow] -= f * b[col];
    }
  }
  for (int col = m - 1; col >= 0; --col) {
    Cplx x = b[col];
    for (int cc = col + 1; cc < m; ++cc) x -= h[col][cc] * b[cc];
    b[col] = x * recip(h[col][col]);
  }
  return det;
}

} // namespace

SaddleState solve_critical(const KnotPreset& K, const std::vector<Cplx>& seed,
                           mpfr_prec_t prec) {
  require(static_cast<int>(seed.size()) == K.m, Status::Invalid,
          "solve_critical: wrong seed size");
  const mpfr_prec_t wp = prec + 32;
  const Real target = pow2(-(prec / 2), wp);
  std::vector<Cplx> mu;
  for (const Cplx& z : seed)
    mu.emplace_back(z.re.rounded_to(wp), z.im.rounded_to(wp));

  for (int iter = 0; iter < 64; ++iter) {
    std::vector<Cplx> g = potential_gradient(K, mu);
    Real res(wp);
    for (const Cplx& gi : g) res = res < abs(gi) ? abs(gi) : res;
    if (res < target) {
      std::vector<std::vector<Cplx>> h = potential_hessian(K, mu);
      for (auto& row : h)
        for (Cplx& z : row) z = -z;
      std::vector<Cplx> dummy(K.m, Cplx::of_long(0, wp));
      // Reuse the elimination only for its determinant of -Hess.
      Cplx det = solve_linear(h, dummy);
      SaddleState st;
      st.mu = mu;
      st.value = potential(K, mu);
      st.hess_det = det;
      return st;
    }
    std::vector<Cplx> rhs;
    for (const Cplx& gi : g) rhs.push_back(-gi);
    solve_linear(potential_hessian(K, mu), rhs);
    for (int u = 0; u < K.m; ++u) mu[u] += rhs[u];
  }
  throw Error(Status::Invalid, "solve_critical: no convergence in 64 steps");
}

std::pair<Real, Real> vol_cs(const KnotPreset& K, mpfr_prec_t prec) {
  const mpfr_prec_t wp = prec + 32;
  std::vector<std::vector<Cplx>> candidates;
  std::vector<Cplx> preset_seed = K.seed(wp);
  if (!preset_seed.empty()) {
    candidates.push_back(std::move(preset_seed));
  } else {
    // Scan the real 1/8 grid, keeping points with every form inside (0, 1),
    // ranked by the real part of the potential (the Lobachevsky sum).
    const long g = 8;
    std::vector<Real> lat = lobachevsky_lattice(g, 128);
    std::vector<double> latd(g);
    for (long j = 0; j < g; ++j) latd[j] = lat[j].to_double();
    struct Cand {
      double w;
      std::array<long, 4> a;
    };
    std::vector<Cand> found;
    long a[4] = {1, 1, 1, 1};
    const int m = K.m;
    for (;;) {
      bool inside = true;
      double w = 0;
      for (const Slot& s : K.slots) {
        long v = ell_value(s, a, m);
        if (v <= 0 || v >= g) {
          inside = false;
          break;
        }
        w += (s.kind <= 1) ? -latd[v] : latd[v];
      }
      if (inside) found.push_back({w, {a[0], a[1], a[2], a[3]}});
      int d = m - 1;
      while (d >= 0 && ++a[d] == g) a[d--] = 1;
      if (d < 0) break;
    }
    std::stable_sort(found.begin(), found.end(),
                     [](const Cand& x, const Cand& y) { return x.w > y.w; });
    size_t top = std::min<size_t>(found.size(), 40);
    for (size_t i = 0; i < top; ++i) {
      std::vector<Cplx> seed;
      for (int u = 0; u < K.m; ++u)
        seed.emplace_back(Rat(found[i].a[u], g).to_real(wp), Real(wp));
      candidates.push_back(std::move(seed));
    }
  }

  for (const std::vector<Cplx>& seed : candidates) {
    try {
      SaddleState st = solve_critical(K, seed, prec);
      Real two_pi = 2 * const_pi(wp);
      Real vol = two_pi * st.value.re;
      Real cs = -(two_pi * st.value.im);
      return {vol.rounded_to(prec), cs.rounded_to(prec)};
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(Status::Invalid, "vol_cs: no seed converged for " + K.name);
}

} // namespace qk
