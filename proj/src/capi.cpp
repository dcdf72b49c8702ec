#include <cmath>

#include "qknot.h"

#include "qknot/knots.hpp"
#include "qknot/modularity.hpp"
#include "qknot/rat.hpp"
#include "qknot/real.hpp"
#include "qknot/special.hpp"
#include "qknot/stats.hpp"

#include <cstdlib>
#include <cstring>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace qk;

// Sessions carry the numeric policy shared by every call: precision, worker
// budget and scan-cache location.  last_error holds the message of the most
// recent failing call.
struct qk_session {
  mpfr_prec_t prec = 192;
  int threads = 1;
  std::string cache_dir;
  std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Run fn, capture its text into *out, translate exceptions to status codes.
template <typename Fn>
int guarded(qk_session* s, char** out, Fn&& fn) {
  if (s == nullptr || out == nullptr) return QK_EINVAL;
  s->last_error.clear();
  *out = nullptr;
  try {
    std::string text = fn();
    *out = dup_string(text);
    if (*out == nullptr) {
      s->last_error = "out of memory";
      return QK_EINVAL;
    }
    return QK_OK;
  } catch (const Error& e) {
    s->last_error = e.what();
    return static_cast<int>(e.status);
  } catch (const std::exception& e) {
    s->last_error = e.what();
    return QK_EINVAL;
  }
}

std::string defect_str(const Real& d) { return d.dec_string(6); }

// Shared shape of the ir / thp verification reports.
struct DefectRow {
  std::string fields_csv;   // leading columns, comma separated
  std::string fields_json;  // same columns as JSON members
  Real defect;
};

std::string render_defects(const std::vector<DefectRow>& rows,
                           const std::string& header, const Real& thresh,
                           int as_json, int* out_pass) {
  bool pass = true;
  for (const DefectRow& row : rows)
    if (!(row.defect < thresh)) pass = false;
  if (out_pass != nullptr) *out_pass = pass ? 1 : 0;
  std::ostringstream os;
  if (as_json != 0) {
    os << "{\"rows\":[";
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i > 0) os << ',';
      os << '{' << rows[i].fields_json << ",\"defect\":\""
         << defect_str(rows[i].defect) << "\"}";
    }
    os << "],\"pass\":" << (pass ? "true" : "false") << '}';
  } else {
    os << header << '\n';
    for (const DefectRow& row : rows)
      os << row.fields_csv << ',' << defect_str(row.defect) << '\n';
  }
  return os.str();
}

// k values in (h, kmax] coprime to h, shared by the th2 / th4 reports.
std::vector<long> coprime_orders(long h, long kmax) {
  require(h >= 1 && kmax > h, Status::Invalid,
          "need 1 <= h < kmax for a report range");
  std::vector<long> ks;
  for (long k = h + 1; k <= kmax; ++k)
    if (std::gcd(h, k) == 1) ks.push_back(k);
  return ks;
}

}  // namespace

extern "C" {

qk_session* qk_session_new(long prec_bits, int threads) {
  if (prec_bits < 64 || prec_bits > (1L << 24) || threads < 1) return nullptr;
  auto* s = new (std::nothrow) qk_session;
  if (s == nullptr) return nullptr;
  s->prec = static_cast<mpfr_prec_t>(prec_bits);
  s->threads = threads;
  const char* env = std::getenv("QKNOT_CACHE_DIR");
  if (env != nullptr) s->cache_dir = env;
  return s;
}

void qk_session_free(qk_session* s) { delete s; }

int qk_session_set_cache_dir(qk_session* s, const char* dir) {
  if (s == nullptr) return QK_EINVAL;
  s->cache_dir = dir == nullptr ? "" : dir;
  return QK_OK;
}

const char* qk_last_error(const qk_session* s) {
  return s == nullptr ? "" : s->last_error.c_str();
}

void qk_string_free(char* str) { std::free(str); }

int qk_eval(qk_session* s, const char* knot, const char* fraction,
            char** out_json) {
  return guarded(s, out_json, [&]() -> std::string {
    require(knot != nullptr && fraction != nullptr, Status::Invalid,
            "eval: knot and fraction are required");
    const KnotPreset& K = knot_preset(knot);
    Fraction x = Rat::parse(fraction);
    Cplx j = kashaev_eval(K, x, s->prec, s->threads);
    std::ostringstream os;
    os << "{\"knot\":\"" << K.name << "\",\"q\":\"" << x.str()
       << "\",\"J\":" << j.json(s->prec) << ",\"bits\":" << s->prec << '}';
    return os.str();
  });
}

int qk_vol_cs(qk_session* s, const char* knot, char** out_json) {
  return guarded(s, out_json, [&]() -> std::string {
    require(knot != nullptr, Status::Invalid, "vol_cs: knot is required");
    const KnotPreset& K = knot_preset(knot);
    auto [vol, cs] = vol_cs(K, s->prec);
    long digits = static_cast<long>(s->prec) * 100 / 332 + 1;
    std::ostringstream os;
    os << "{\"knot\":\"" << K.name << "\",\"vol\":\"" << vol.dec_string(digits)
       << "\",\"cs\":\"" << cs.dec_string(digits) << "\",\"bits\":" << s->prec
       << '}';
    return os.str();
  });
}

int qk_verify_ir(qk_session* s, long p, long pbar, long qbar, long q, long d,
                 long n, long r, int as_json, char** out, int* out_pass) {
  return guarded(s, out, [&]() -> std::string {
    ModularSetup setup = modular_setup(p, q, pbar, qbar, n, d);
    std::vector<IrReport> reports;
    if (r < 0) {
      reports = verify_ir_all(setup, s->prec);
    } else {
      reports.push_back(verify_ir(setup, r, s->prec));
    }
    std::vector<DefectRow> rows;
    rows.reserve(reports.size());
    for (const IrReport& rep : reports) {
      std::ostringstream csv, json;
      csv << p << ',' << q << ',' << pbar << ',' << qbar << ',' << n << ','
          << d << ',' << rep.r << ',' << rep.L;
      json << "\"p\":" << p << ",\"q\":" << q << ",\"pbar\":" << pbar
           << ",\"qbar\":" << qbar << ",\"N\":" << n << ",\"d\":" << d
           << ",\"r\":" << rep.r << ",\"L\":" << rep.L;
      rows.push_back({csv.str(), json.str(), rep.defect});
    }
    return render_defects(rows, "p,q,pbar,qbar,N,d,r,L,defect",
                          pow2(-(s->prec / 4), 64), as_json, out_pass);
  });
}

int qk_verify_thp(qk_session* s, long h, long k, long r, int as_json,
                  char** out, int* out_pass) {
  return guarded(s, out, [&]() -> std::string {
    std::vector<std::pair<long, Real>> defects;
    if (r < 0) {
      std::vector<Real> all = verify_thp_all(h, k, s->prec);
      for (size_t i = 0; i < all.size(); ++i)
        defects.emplace_back(static_cast<long>(i), all[i]);
    } else {
      defects.emplace_back(r, verify_thp_decomposition(h, k, r, s->prec));
    }
    std::vector<DefectRow> rows;
    rows.reserve(defects.size());
    for (const auto& [ri, defect] : defects) {
      std::ostringstream csv, json;
      csv << h << ',' << k << ',' << ri;
      json << "\"h\":" << h << ",\"k\":" << k << ",\"r\":" << ri;
      rows.push_back({csv.str(), json.str(), defect});
    }
    return render_defects(rows, "h,k,r,defect", pow2(-(s->prec / 4), 64),
                          as_json, out_pass);
  });
}

int qk_verify_th2(qk_session* s, long h, long kmax, int as_json, char** out) {
  return guarded(s, out, [&]() -> std::string {
    std::ostringstream os;
    bool first = true;
    if (as_json != 0)
      os << "{\"rows\":[";
    else
      os << "h,k,H,envelope,ratio\n";
    for (long k : coprime_orders(h, kmax)) {
      auto [gap, envelope] = reciprocity_H(h, k, s->prec);
      Real ratio = gap / envelope;
      if (as_json != 0) {
        if (!first) os << ',';
        os << "{\"h\":" << h << ",\"k\":" << k << ",\"H\":\""
           << gap.dec_string(10) << "\",\"envelope\":\""
           << envelope.dec_string(10) << "\",\"ratio\":\""
           << ratio.dec_string(6) << "\"}";
      } else {
        os << h << ',' << k << ',' << gap.dec_string(10) << ','
           << envelope.dec_string(10) << ',' << ratio.dec_string(6) << '\n';
      }
      first = false;
    }
    if (as_json != 0) os << "]}";
    return os.str();
  });
}

int qk_verify_th4(qk_session* s, long h, long kmax, int as_json, char** out) {
  return guarded(s, out, [&]() -> std::string {
    std::ostringstream os;
    bool first = true;
    if (as_json != 0)
      os << "{\"rows\":[";
    else
      os << "h,k,residual_over_envelope\n";
    for (long k : coprime_orders(h, kmax)) {
      // The report only covers orders whose leading cotangent sum is
      // negative; the growth statement is about that subfamily.
      long kbar = mod_inverse(k % h, h);
      if (!(cotangent_sum_c0(kbar, h, s->prec).sgn() < 0)) continue;
      Real ratio = th4_check(h, k, s->prec);
      if (as_json != 0) {
        if (!first) os << ',';
        os << "{\"h\":" << h << ",\"k\":" << k << ",\"ratio\":\""
           << ratio.dec_string(6) << "\"}";
      } else {
        os << h << ',' << k << ',' << ratio.dec_string(6) << '\n';
      }
      first = false;
    }
    if (as_json != 0) os << "]}";
    return os.str();
  });
}

int qk_scan(qk_session* s, const char* knot, long n_max, char** out_csv) {
  return guarded(s, out_csv, [&]() -> std::string {
    require(knot != nullptr, Status::Invalid, "scan: knot is required");
    ScanResult scan =
        scan_roots(knot, n_max, s->prec, s->cache_dir, s->threads);
    std::ostringstream os;
    write_scan_csv(scan, os);
    return os.str();
  });
}

int qk_figure(qk_session* s, long n_max, const char* lo, const char* hi,
              char** out_csv) {
  return guarded(s, out_csv, [&]() -> std::string {
    std::optional<std::pair<Rat, Rat>> window;
    require((lo == nullptr) == (hi == nullptr), Status::Invalid,
            "figure: window needs both endpoints");
    if (lo != nullptr) window.emplace(Rat::parse(lo), Rat::parse(hi));
    std::ostringstream os;
    figure_data(n_max, window, s->prec, os, s->cache_dir, s->threads);
    return os.str();
  });
}

int qk_lln(qk_session* s, const char* family, long n_max, int as_json,
           char** out) {
  return guarded(s, out, [&]() -> std::string {
    require(family != nullptr, Status::Invalid, "lln: family is required");
    std::string fam(family);
    std::vector<Fraction> alphas;
    if (fam == "fib") {
      require(n_max >= 3 && n_max <= 85, Status::Invalid,
              "lln: fib family takes 3 <= n-max <= 85");
      long a = 1, b = 1;  // F_1, F_2
      for (long i = 3; i <= n_max; ++i) {
        long c = a + b;
        a = b;
        b = c;
        alphas.emplace_back(a, b);  // F_{i-1} / F_i
      }
    } else if (fam == "unit") {
      require(n_max >= 50, Status::Invalid,
              "lln: unit family takes n-max >= 50");
      for (long n = 50; n <= n_max; n *= 2) alphas.emplace_back(1, n);
    } else {
      require(false, Status::Invalid, "lln: family must be fib or unit");
    }
    std::vector<LlnPoint> pts = lln_check(alphas, s->prec);

    // Least-squares slope of logJ against sigma.
    const mpfr_prec_t wp = s->prec;
    Real sx(wp), sy(wp), sxx(wp), sxy(wp);
    for (const LlnPoint& p : pts) {
      Real x = Real::of_long(p.sigma, wp);
      sx += x;
      sy += p.logj;
      sxx += sqr(x);
      sxy += x * p.logj;
    }
    long n = static_cast<long>(pts.size());
    require(n >= 2, Status::Invalid, "lln: need at least two family members");
    Real slope = (sxy * n - sx * sy) / (sxx * n - sqr(sx));

    std::ostringstream os;
    if (as_json != 0) {
      os << "{\"family\":\"" << fam << "\",\"points\":[";
      for (size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) os << ',';
        os << "{\"alpha\":\"" << pts[i].alpha.str()
           << "\",\"sigma\":" << pts[i].sigma << ",\"r\":" << pts[i].depth
           << ",\"logJ\":\"" << pts[i].logj.dec_string(16)
           << "\",\"ratio\":\"" << pts[i].ratio.dec_string(16) << "\"}";
      }
      os << "],\"slope\":\"" << slope.dec_string(16) << "\"}";
    } else {
      os << "alpha,sigma,r,logJ,ratio\n";
      for (const LlnPoint& p : pts)
        os << p.alpha.str() << ',' << p.sigma << ',' << p.depth << ','
           << p.logj.dec_string(16) << ',' << p.ratio.dec_string(16) << '\n';
      os << "# slope," << slope.dec_string(16) << '\n';
    }
    return os.str();
  });
}

int qk_hist(qk_session* s, const char* knot, long n_max, long bins,
            int as_json, char** out) {
  return guarded(s, out, [&]() -> std::string {
    require(knot != nullptr, Status::Invalid, "hist: knot is required");
    ScanResult scan =
        scan_roots(knot, n_max, s->prec, s->cache_dir, s->threads);
    StableLawSpec law;
    HistogramReport rep = histogram_compare(scan, law, bins, s->prec);
    std::ostringstream os;
    if (as_json != 0) {
      os << "{\"knot\":\"" << scan.knot << "\",\"N\":" << n_max
         << ",\"bins\":" << bins << ",\"n\":" << rep.n << ",\"d_fit\":\""
         << rep.d_fit.dec_string(16) << "\",\"ks\":\"" << rep.ks.dec_string(16)
         << "\",\"edges\":[";
      for (size_t i = 0; i < rep.edges.size(); ++i) {
        if (i > 0) os << ',';
        os << '"' << rep.edges[i].dec_string(16) << '"';
      }
      os << "],\"counts\":[";
      for (size_t i = 0; i < rep.counts.size(); ++i) {
        if (i > 0) os << ',';
        os << rep.counts[i];
      }
      os << "],\"density\":[";
      for (size_t i = 0; i < rep.density.size(); ++i) {
        if (i > 0) os << ',';
        os << '"' << rep.density[i].dec_string(16) << '"';
      }
      os << "]}";
    } else {
      os << "# n=" << rep.n << " d_fit=" << rep.d_fit.dec_string(16)
         << " ks=" << rep.ks.dec_string(16) << '\n'
         << "lo,hi,count,density\n";
      for (size_t i = 0; i < rep.counts.size(); ++i)
        os << rep.edges[i].dec_string(16) << ','
           << rep.edges[i + 1].dec_string(16) << ',' << rep.counts[i] << ','
           << rep.density[i].dec_string(16) << '\n';
    }
    return os.str();
  });
}

}  // extern "C"
