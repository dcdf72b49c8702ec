#ifndef QKNOT_H
#define QKNOT_H

/* C interface to the quantum-invariant library.  All state lives in an
 * opaque session (precision, thread budget, cache directory); every
 * operation returns a status code and, on success, a heap string the caller
 * releases with qk_string_free.  Status codes double as CLI exit codes. */

#ifdef __cplusplus
extern "C" {
#endif

#define QK_OK 0      /* success */
#define QK_EINVAL 2  /* bad arguments / parse error */
#define QK_ECAP 3    /* a size or precision cap was exceeded */
#define QK_EDISK 4   /* file I/O failure */

typedef struct qk_session qk_session;

/* prec_bits >= 64; threads >= 1 caps the worker pool.  The scan cache
 * directory starts from the QKNOT_CACHE_DIR environment variable (empty /
 * unset = no caching) and can be overridden per session.  Returns NULL only
 * on allocation failure or invalid arguments. */
qk_session* qk_session_new(long prec_bits, int threads);
void qk_session_free(qk_session* s);
int qk_session_set_cache_dir(qk_session* s, const char* dir);

/* Message for the most recent failing call on this session.  Owned by the
 * session; valid until the next call on it. */
const char* qk_last_error(const qk_session* s);

void qk_string_free(char* str);

/* Kashaev invariant at the root of unity e(h/k).  fraction is "h/k" (or an
 * integer for the trivial root).  JSON:
 *   {"knot":"4_1","q":"1/3","J":{"re":"13","im":"0","bits":192},"bits":192} */
int qk_eval(qk_session* s, const char* knot, const char* fraction,
            char** out_json);

/* Hyperbolic volume and Chern-Simons value of a preset knot.
 * JSON: {"knot":…,"vol":…,"cs":…,"bits":…} */
int qk_vol_cs(qk_session* s, const char* knot, char** out_json);

/* First reciprocity check on the single modular setup (p, pbar, qbar, q, d,
 * n): rows for one r, or for every 1 <= r < k when r < 0.  Output is CSV
 * (p,q,pbar,qbar,N,d,r,L,defect) or a JSON array.  *out_pass = 1 iff every
 * defect < 2^{-prec/4}. */
int qk_verify_ir(qk_session* s, long p, long pbar, long qbar, long q, long d,
                 long n, long r, int as_json, char** out, int* out_pass);

/* Exact Pochhammer-quotient decomposition at h/k: rows (h,k,r,defect) for
 * one r or all 0 <= r < k (r < 0).  *out_pass as above. */
int qk_verify_thp(qk_session* s, long h, long k, long r, int as_json,
                  char** out, int* out_pass);

/* Second-reciprocity gap report: rows (h,k,H,envelope,ratio) for every
 * k in (h, kmax] coprime to h.  Report only; no pass flag. */
int qk_verify_th2(qk_session* s, long h, long kmax, int as_json, char** out);

/* Cotangent-sum growth report: rows (h,k,residual_over_envelope) for every
 * k in (h, kmax] coprime to h whose leading cotangent sum is negative.
 * Report only. */
int qk_verify_th4(qk_session* s, long h, long kmax, int as_json, char** out);

/* Root-of-unity scan of a preset knot: CSV num,den,logJ,sigma,r,H,Hstar
 * (H/Hstar filled for 4_1), one row per reduced h/k with k <= n_max. */
int qk_scan(qk_session* s, const char* knot, long n_max, char** out_csv);

/* Figure data for the 4_1 modular-jump graphs: CSV x,H,Hstar in ascending
 * x = h/k, optionally restricted to [lo, hi] (fractions as strings; pass
 * NULL for the full range). */
int qk_figure(qk_session* s, long n_max, const char* lo, const char* hi,
              char** out_csv);

/* Law-of-large-numbers probe.  family = "fib" (Fibonacci quotients
 * F_{n-1}/F_n up to index n_max) or "unit" (1/N for N = 50, 100, ... up to
 * n_max).  CSV alpha,sigma,r,logJ,ratio plus a trailing "# slope,…" line
 * with the least-squares slope of logJ against sigma; JSON carries the same
 * rows and slope. */
int qk_lln(qk_session* s, const char* family, long n_max, int as_json,
           char** out);

/* Stable-law histogram of the normalized scan statistic.  JSON object with
 * d_fit, ks, edges, counts and the density overlay; CSV is the bins table
 * prefixed by one "# n=… d_fit=… ks=…" comment line. */
int qk_hist(qk_session* s, const char* knot, long n_max, long bins,
            int as_json, char** out);

#ifdef __cplusplus
}
#endif

#endif /* QKNOT_H */
