#pragma once

#include "qknot/rat.hpp"
#include "qknot/real.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace qk {

// One reduced fraction h/k together with the scan data attached to it:
// logJ = log|J(e(h/k))|, the continued-fraction statistics of h/k, and the
// modular jumps H(h/k) = logJ(h/k) - logJ(k/h mod 1) and H*(h/k), the same
// with both numerators replaced by their modular inverses.  H and H* are
// filled for figure-eight scans only.
struct ScanRecord {
  long h = 0, k = 0;
  Real logj;
  long sigma = 0;  // sum of the partial quotients of h/k
  long depth = 0;  // number of partial quotients
  bool has_h = false, has_hstar = false;
  Real hval, hstar;
};

// A whole scan: every reduced h/k with 1 <= h < k <= n_max, plus the context
// needed by downstream consumers (knot name for volume lookups).
struct ScanResult {
  std::string knot;
  long n_max = 0;
  mpfr_prec_t prec = 0;
  std::vector<ScanRecord> rows;
};

// The fixed stable law S1(6/pi, 1, 0), with characteristic function
//   phi(t) = exp(-(6/pi) |t| (1 + i (2/pi) sgn(t) log|t|)).
// The fields exist to pin the convention in one place; validate() rejects
// anything but the canonical values.
struct StableLawSpec {
  long stability = 1;
  long skewness = 1;
  long location = 0;
  bool scale_six_over_pi = true;
  void validate() const;
};

// Scan all roots of unity of order <= n_max.  For "4_1" the values come from
// the real positive-sum form and the H/H* columns are filled from the same
// table; other preset knots get logJ only.  If cache_dir is nonempty, values
// are reused from / appended to "<cache_dir>/<knot>.cache" as lines
// "h k prec hexfloat" (exact round trip, so cached and fresh runs agree
// bit for bit).
ScanResult scan_roots(const std::string& knot, long n_max, mpfr_prec_t prec,
                      const std::string& cache_dir = std::string(),
                      int threads = 1);

// Law-of-large-numbers probe: for each alpha, Sigma and r from the continued
// fraction, logJ = log J_{4_1}(e(alpha)), and ratio = logJ / ((Vol/2pi) Sigma).
struct LlnPoint {
  Fraction alpha;
  long sigma = 0, depth = 0;
  Real logj, ratio;
};
std::vector<LlnPoint> lln_check(const std::vector<Fraction>& family,
                                mpfr_prec_t prec);

// Density of S1(6/pi,1,0) by inversion of the characteristic function:
//   f(x) = (1/pi) int_0^inf e^{-(6/pi)t} cos(t x + (12/pi^2) t log t) dt.
// For |x| > 4 the range is split at multiples of pi/|x| before quadrature.
Real stable_density(const Real& x, const StableLawSpec& law, mpfr_prec_t prec);

// Distribution function, by the sign-resolved inversion integral
//   F(x) = 1/2 + (1/pi) int_0^inf e^{-(6/pi)t} sin(t x + (12/pi^2) t log t) / t dt.
Real stable_cdf(const Real& x, const StableLawSpec& law, mpfr_prec_t prec);

// Median of the law (bisection on stable_cdf).
Real stable_median(const StableLawSpec& law, mpfr_prec_t prec);

// Histogram of the normalized statistic
//   y = logJ / ((Vol/2pi) log N) - (12/pi^2) log log N - D
// over a scan, with the centering D fitted so the empirical median matches
// the law's median (the conjectural closed form for D is out of scope).
// The Kolmogorov-Smirnov distance is evaluated at the bin edges and is
// reported, not asserted: the underlying statement is a conjecture.
struct HistogramReport {
  Real d_fit;                // fitted centering constant
  std::vector<Real> edges;   // bins + 1 ascending edges
  std::vector<long> counts;  // bins occupancies
  std::vector<Real> density; // law density at bin midpoints
  Real ks;                   // max over edges of |F_emp - F_law|
  long n = 0;
};
HistogramReport histogram_compare(const ScanResult& scan,
                                  const StableLawSpec& law, long bins,
                                  mpfr_prec_t prec);

// Canonical CSV serialization (header num,den,logJ,sigma,r,H,Hstar; absent
// H/H* cells left empty).  The optional window keeps rows with
// lo <= h/k <= hi.
void write_scan_csv(const ScanResult& scan, std::ostream& out,
                    const std::optional<std::pair<Rat, Rat>>& window =
                        std::nullopt);

// Figure-eight H/H* graph data: columns x,H,Hstar with x = h/k as a decimal,
// one row per reduced fraction with k <= n_max in ascending x order,
// optionally restricted to a window.
void figure_data(long n_max, const std::optional<std::pair<Rat, Rat>>& window,
                 mpfr_prec_t prec, std::ostream& out,
                 const std::string& cache_dir = std::string(), int threads = 1);

} // namespace qk
