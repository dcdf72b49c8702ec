#include <cmath>

#include "qknot/stats.hpp"

#include "qknot/knots.hpp"
#include "qknot/quad.hpp"
#include "qknot/special.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

namespace qk {
namespace {

long long pack_hk(long h, long k) {
  return (static_cast<long long>(k) << 20) | static_cast<long long>(h);
}

// Disk cache of scan values: one line "h k prec hexfloat" per entry, exact
// round trip.  Missing file = empty cache; unreadable lines are skipped so a
// foreign or truncated file cannot poison a scan.
class ScanCache {
 public:
  ScanCache(const std::string& dir, const std::string& knot,
            mpfr_prec_t prec)
      : prec_(prec) {
    if (dir.empty()) return;
    path_ = dir + "/" + knot + ".cache";
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream row(line);
      long h = 0, k = 0, pr = 0;
      std::string hex;
      if (!(row >> h >> k >> pr >> hex)) continue;
      if (pr != static_cast<long>(prec_) || h < 1 || k < 2) continue;
      try {
        values_.emplace(pack_hk(h, k), Real::parse_hex(hex, prec_));
      } catch (const Error&) {
        continue;
      }
    }
  }

  const Real* find(long h, long k) const {
    auto it = values_.find(pack_hk(h, k));
    return it == values_.end() ? nullptr : &it->second;
  }

  void add_fresh(long h, long k, const Real& v) {
    if (path_.empty()) return;
    fresh_.emplace_back(pack_hk(h, k), v.hex_string());
  }

  void flush() {
    if (path_.empty() || fresh_.empty()) return;
    std::sort(fresh_.begin(), fresh_.end());
    std::ofstream out(path_, std::ios::app);
    for (const auto& [key, hex] : fresh_) {
      long h = static_cast<long>(key & ((1 << 20) - 1));
      long k = static_cast<long>(key >> 20);
      out << h << ' ' << k << ' ' << static_cast<long>(prec_) << ' ' << hex
          << '\n';
    }
    require(static_cast<bool>(out), Status::Disk, "cache write failed");
    fresh_.clear();
  }

 private:
  mpfr_prec_t prec_;
  std::string path_;
  std::map<long long, Real> values_;
  std::vector<std::pair<long long, std::string>> fresh_;
};

Real vol_over_2pi_41(mpfr_prec_t wp) {
  return 3 * lobachevsky(Rat(1, 3), wp);
}

// Median of an unsorted list (average of the two middle values when even).
Real median_of(std::vector<Real> v, mpfr_prec_t wp) {
  require(!v.empty(), Status::Invalid, "median of empty list");
  std::sort(v.begin(), v.end(),
            [](const Real& a, const Real& b) { return a < b; });
  size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return (v[n / 2 - 1] + v[n / 2]).rounded_to(wp) / 2;
}

// Shared context for the stable-law inversion integrals: decay rate
// c = 6/pi, phase slope beta = 12/pi^2, truncation at e^{-c tmax} ~ 2^{-et-8},
// and the tanh-sinh rule used on every panel.
struct LawContext {
  mpfr_prec_t wp;
  long et;
  Real pi, c, beta, tmax;
  const QuadRule& rule;

  explicit LawContext(mpfr_prec_t prec)
      : wp(prec / 2 + 48),
        et(prec / 2 + 16),
        pi(const_pi(wp)),
        c(Real::of_long(6, wp) / const_pi(wp)),
        beta(Real::of_long(12, wp) / (const_pi(wp) * const_pi(wp))),
        tmax(const_log2(wp) * (et + 8) / c),
        rule(quad_rule(wp, et)) {}

  // Integral over [0, tmax] of F, split into panels of width pi / max(|x|, 4)
  // so that each panel carries a bounded amount of phase.
  template <typename F>
  Real oscillatory(const Real& x, F&& f) const {
    Real ax = abs(x);
    if (ax < Real::of_long(4, wp)) ax = Real::of_long(4, wp);
    Real width = pi / ax;
    long panels = static_cast<long>((tmax / width).to_double()) + 1;
    Real sum(wp), one(wp);
    mpfr_set_ui(one.v, 1, MPFR_RNDN);
    for (long j = 0; j < panels; ++j) {
      Real a = width * j;
      QuadResult r =
          quad_01(rule, one, [&](const QuadNode& n, long, long) -> Cplx {
            Real t = a + width * n.x;
            return Cplx(f(t), Real(wp));
          });
      require(r.converged, Status::Invalid,
              "stable-law quadrature did not converge");
      sum += r.value.re * width;
    }
    return sum;
  }

  Real phase(const Real& t, const Real& x) const {
    return t * x + beta * (t * log(t));
  }
};

} // namespace

void StableLawSpec::validate() const {
  require(stability == 1 && skewness == 1 && location == 0 &&
              scale_six_over_pi,
          Status::Invalid, "stable law is fixed to S1(6/pi, 1, 0)");
}

ScanResult scan_roots(const std::string& knot, long n_max, mpfr_prec_t prec,
                      const std::string& cache_dir, int threads) {
  const KnotPreset& K = knot_preset(knot);
  require(n_max >= 1 && n_max < (1 << 20), Status::Invalid,
          "scan_roots: order bound out of range");
  const bool is41 = (knot == "4_1");
  ScanCache cache(cache_dir, knot, prec);

  // Denominator-major enumeration; records land in (k, h) order regardless
  // of the thread count.
  std::vector<std::pair<long, long>> todo;
  for (long k = 2; k <= n_max; ++k)
    for (long h = 1; h < k; ++h)
      if (std::gcd(h, k) == 1) todo.emplace_back(k, h);

  std::vector<Real> logj(todo.size(), Real(prec));
  std::vector<bool> from_cache(todo.size(), false);
  for (size_t i = 0; i < todo.size(); ++i) {
    if (const Real* hit = cache.find(todo[i].second, todo[i].first)) {
      logj[i] = *hit;
      from_cache[i] = true;
    }
  }

  long nthreads = std::max(1, std::min(threads, 64));
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    try {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= todo.size()) return;
        if (from_cache[i]) continue;
        {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (failure) return;
        }
        auto [k, h] = todo[i];
        Fraction x(h, k);
        if (is41) {
          logj[i] = log(kashaev_41(x, prec)).rounded_to(prec);
        } else {
          Real a = abs(kashaev_eval(K, x, prec));
          require(!a.is_zero(), Status::Invalid,
                  "scan_roots: invariant vanished, log undefined");
          logj[i] = log(a).rounded_to(prec);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (long t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::map<long long, const Real*> table;
  for (size_t i = 0; i < todo.size(); ++i) {
    table[pack_hk(todo[i].second, todo[i].first)] = &logj[i];
    if (!from_cache[i]) cache.add_fresh(todo[i].second, todo[i].first, logj[i]);
  }
  cache.flush();

  ScanResult out;
  out.knot = knot;
  out.n_max = n_max;
  out.prec = prec;
  out.rows.reserve(todo.size());
  auto lookup = [&](long h, long k) -> const Real& {
    auto it = table.find(pack_hk(h, k));
    require(it != table.end(), Status::Invalid, "scan table lookup failed");
    return *it->second;
  };
  for (size_t i = 0; i < todo.size(); ++i) {
    auto [k, h] = todo[i];
    ScanRecord rec;
    rec.h = h;
    rec.k = k;
    rec.logj = logj[i];
    auto [sig, depth] = sigma_r(Fraction(h, k));
    rec.sigma = sig.to_long();
    rec.depth = depth;
    if (is41) {
      // H(h/k) = logJ(h/k) - logJ((k mod h)/h); the h = 1 tail is logJ at the
      // trivial root, which is 0.
      Real second = h == 1 ? Real(prec) : lookup(k % h, h);
      rec.hval = (logj[i] - second).rounded_to(prec);
      rec.has_h = true;
      long hbar = mod_inverse(h % k, k);
      Real first = lookup(hbar, k);
      Real second_star =
          h == 1 ? Real(prec) : lookup(mod_inverse(k % h, h), h);
      rec.hstar = (first - second_star).rounded_to(prec);
      rec.has_hstar = true;
    }
    out.rows.push_back(std::move(rec));
  }
  return out;
}

std::vector<LlnPoint> lln_check(const std::vector<Fraction>& family,
                                mpfr_prec_t prec) {
  const mpfr_prec_t wp = prec + 16;
  Real v2p = vol_over_2pi_41(wp);
  std::vector<LlnPoint> out;
  out.reserve(family.size());
  for (const Fraction& alpha : family) {
    require(alpha.sgn() > 0 && alpha < Rat(1), Status::Invalid,
            "lln_check: fractions must lie in (0, 1)");
    LlnPoint pt;
    pt.alpha = alpha;
    auto [sig, depth] = sigma_r(alpha);
    pt.sigma = sig.to_long();
    pt.depth = depth;
    pt.logj = log(kashaev_41(alpha, prec)).rounded_to(prec);
    pt.ratio = (pt.logj / (v2p * Real::of_long(pt.sigma, wp))).rounded_to(prec);
    out.push_back(std::move(pt));
  }
  return out;
}

Real stable_density(const Real& x, const StableLawSpec& law,
                    mpfr_prec_t prec) {
  law.validate();
  LawContext ctx(prec);
  Real xr = x.rounded_to(ctx.wp);
  Real val = ctx.oscillatory(xr, [&](const Real& t) {
    return exp(-(ctx.c * t)) * cos(ctx.phase(t, xr));
  });
  return (val / ctx.pi).rounded_to(prec);
}

Real stable_cdf(const Real& x, const StableLawSpec& law, mpfr_prec_t prec) {
  law.validate();
  LawContext ctx(prec);
  Real xr = x.rounded_to(ctx.wp);
  Real val = ctx.oscillatory(xr, [&](const Real& t) {
    return exp(-(ctx.c * t)) * sin(ctx.phase(t, xr)) / t;
  });
  Real half(ctx.wp);
  mpfr_set_ui_2exp(half.v, 1, -1, MPFR_RNDN);
  return (half + val / ctx.pi).rounded_to(prec);
}

Real stable_median(const StableLawSpec& law, mpfr_prec_t prec) {
  law.validate();
  const mpfr_prec_t wp = prec + 16;
  Real half(wp);
  mpfr_set_ui_2exp(half.v, 1, -1, MPFR_RNDN);
  Real lo = Real::of_long(-8, wp), hi = Real::of_long(8, wp);
  while (!(stable_cdf(lo, law, prec) < half)) lo = 2 * lo;
  while (!(half < stable_cdf(hi, law, prec))) hi = 2 * hi;
  Real tol = pow2(-(prec / 4), wp);
  while (tol < hi - lo) {
    Real mid = (lo + hi) / 2;
    if (stable_cdf(mid, law, prec) < half)
      lo = mid;
    else
      hi = mid;
  }
  return ((lo + hi) / 2).rounded_to(prec);
}

HistogramReport histogram_compare(const ScanResult& scan,
                                  const StableLawSpec& law, long bins,
                                  mpfr_prec_t prec) {
  law.validate();
  require(!scan.rows.empty(), Status::Invalid,
          "histogram_compare: empty record set");
  require(bins >= 1, Status::Invalid, "histogram_compare: bins must be >= 1");
  const mpfr_prec_t wp = prec + 16;

  Real v2p;
  if (scan.knot == "4_1") {
    v2p = vol_over_2pi_41(wp);
  } else {
    v2p = vol_cs(knot_preset(scan.knot), prec).first / (2 * const_pi(wp));
  }
  Real logn = log(Real::of_long(scan.n_max, wp));
  Real beta = Real::of_long(12, wp) / (const_pi(wp) * const_pi(wp));
  Real shift = beta * log(logn);

  std::vector<Real> z;
  z.reserve(scan.rows.size());
  for (const ScanRecord& rec : scan.rows)
    z.push_back(rec.logj / (v2p * logn) - shift);

  Real med_law = stable_median(law, prec);
  Real d_fit = median_of(z, wp) - med_law;

  std::vector<Real> y;
  y.reserve(z.size());
  for (const Real& zi : z) y.push_back((zi - d_fit).rounded_to(wp));
  std::vector<Real> sorted = y;
  std::sort(sorted.begin(), sorted.end(),
            [](const Real& a, const Real& b) { return a < b; });
  Real lo = sorted.front(), hi = sorted.back();
  Real span = hi - lo;
  require(span.sgn() > 0, Status::Invalid,
          "histogram_compare: degenerate sample");

  HistogramReport rep;
  rep.n = static_cast<long>(y.size());
  rep.d_fit = d_fit.rounded_to(prec);
  rep.edges.reserve(bins + 1);
  for (long j = 0; j <= bins; ++j)
    rep.edges.push_back(
        (lo + span * Real::of_long(j, wp) / Real::of_long(bins, wp))
            .rounded_to(prec));
  rep.counts.assign(bins, 0);
  for (const Real& yi : y) {
    long idx = static_cast<long>(((yi - lo) / span).to_double() * bins);
    if (idx < 0) idx = 0;
    if (idx >= bins) idx = bins - 1;
    ++rep.counts[idx];
  }
  rep.density.reserve(bins);
  for (long j = 0; j < bins; ++j) {
    Real mid = (rep.edges[j] + rep.edges[j + 1]) / 2;
    rep.density.push_back(stable_density(mid, law, prec));
  }
  Real ks(wp);
  Real n_real = Real::of_long(rep.n, wp);
  for (const Real& edge : rep.edges) {
    long below = static_cast<long>(
        std::upper_bound(sorted.begin(), sorted.end(), edge,
                         [](const Real& a, const Real& b) { return a < b; }) -
        sorted.begin());
    Real diff = abs(Real::of_long(below, wp) / n_real -
                    stable_cdf(edge, law, prec));
    if (ks < diff) ks = diff;
  }
  rep.ks = ks.rounded_to(prec);
  return rep;
}

void write_scan_csv(const ScanResult& scan, std::ostream& out,
                    const std::optional<std::pair<Rat, Rat>>& window) {
  out << "num,den,logJ,sigma,r,H,Hstar\n";
  for (const ScanRecord& rec : scan.rows) {
    if (window) {
      Rat x(rec.h, rec.k);
      if (x < window->first || window->second < x) continue;
    }
    out << rec.h << ',' << rec.k << ',' << rec.logj.dec_string(16) << ','
        << rec.sigma << ',' << rec.depth << ',';
    if (rec.has_h) out << rec.hval.dec_string(16);
    out << ',';
    if (rec.has_hstar) out << rec.hstar.dec_string(16);
    out << '\n';
  }
  require(static_cast<bool>(out), Status::Disk, "CSV write failed");
}

void figure_data(long n_max, const std::optional<std::pair<Rat, Rat>>& window,
                 mpfr_prec_t prec, std::ostream& out,
                 const std::string& cache_dir, int threads) {
  ScanResult scan = scan_roots("4_1", n_max, prec, cache_dir, threads);
  std::vector<const ScanRecord*> rows;
  rows.reserve(scan.rows.size());
  for (const ScanRecord& rec : scan.rows) {
    if (window) {
      Rat x(rec.h, rec.k);
      if (x < window->first || window->second < x) continue;
    }
    rows.push_back(&rec);
  }
  // Ascending x = h/k; distinct reduced fractions, so h1 k2 != h2 k1.
  std::sort(rows.begin(), rows.end(),
            [](const ScanRecord* a, const ScanRecord* b) {
              return static_cast<long long>(a->h) * b->k <
                     static_cast<long long>(b->h) * a->k;
            });
  out << "x,H,Hstar\n";
  for (const ScanRecord* rec : rows) {
    out << Rat(rec->h, rec->k).to_real(prec).dec_string(16) << ','
        << rec->hval.dec_string(16) << ',' << rec->hstar.dec_string(16)
        << '\n';
  }
  require(static_cast<bool>(out), Status::Disk, "CSV write failed");
}

} // namespace qk
