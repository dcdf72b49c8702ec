#include "qknot/quad.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace qk {

namespace {

// Append the pair of nodes at +u and -u (they share a weight); u > 0.
void push_node_pair(std::vector<QuadNode>& out, const Real& u, const QuadRule& rule) {
  mpfr_prec_t wp = rule.wp;
  Real s = sinh(u);
  Real emp = exp(-(const_pi(wp) * s));  // e^{-pi sinh u}, < 1
  Real den = emp + 1;
  Real xp = Real::of_long(1, wp) / den;  // -> 1 as u grows
  Real xm = emp / den;                   // mirror node, -> 0
  Real w = const_pi(wp) * cosh(u) * xp * xm;
  for (const Real* x : {&xm, &xp}) {
    QuadNode n;
    n.x = *x;
    n.w = w;
    n.t = rule.T * n.x;
    n.E = exp(const_pi(wp) * 2 * n.t);
    out.push_back(std::move(n));
  }
}

std::unique_ptr<QuadRule> build_rule(mpfr_prec_t wp, long et) {
  auto rule = std::make_unique<QuadRule>();
  rule->wp = wp;
  rule->et = et;
  rule->max_level = 8;
  Real l2 = const_log2(wp), pi = const_pi(wp);
  rule->T = l2 * (et + 16) / (pi * 2) + 1;
  // Truncate u where the weight factor x(1-x) ~ e^{-pi sinh u} underflows the
  // target: pi sinh U = (et+16) log 2.
  Real arg = l2 * (et + 16) / pi;
  Real U = log(arg + hypot(arg, Real::of_long(1, wp)));  // asinh

  rule->levels.resize(rule->max_level + 1);
  {
    // Level 0: step 1, u = 0, +-1, +-2, ...
    QuadNode n0;
    n0.x = Real(wp);
    mpfr_set_d(n0.x.v, 0.5, MPFR_RNDN);
    n0.w = pi / 4;
    n0.t = rule->T * n0.x;
    n0.E = exp(pi * 2 * n0.t);
    rule->levels[0].push_back(std::move(n0));
    for (long j = 1; Real::of_long(j, wp) <= U; ++j)
      push_node_pair(rule->levels[0], Real::of_long(j, wp), *rule);
  }
  for (long lev = 1; lev <= rule->max_level; ++lev) {
    Real h = pow2(-lev, wp);
    for (long j = 1;; j += 2) {  // odd multiples only: new at this level
      Real u = h * j;
      if (!(u <= U)) break;
      push_node_pair(rule->levels[lev], u, *rule);
    }
  }
  return rule;
}

std::mutex rule_mutex;
std::map<std::pair<mpfr_prec_t, long>, std::unique_ptr<QuadRule>> rule_cache;

QuadResult run_levels(const QuadRule& rule, const Real& scale, const QuadFn& f) {
  mpfr_prec_t wp = rule.wp;
  Real tol = pow2(-rule.et, wp) * abs(scale);
  Cplx sum(wp);
  for (size_t i = 0; i < rule.levels[0].size(); ++i)
    sum += f(rule.levels[0][i], 0, static_cast<long>(i)) * rule.levels[0][i].w;
  Cplx s_prev = sum;  // level-0 estimate, step h = 1
  Real d_prev(wp);
  QuadResult res;
  for (long lev = 1; lev <= rule.max_level; ++lev) {
    Cplx add(wp);
    for (size_t i = 0; i < rule.levels[lev].size(); ++i)
      add += f(rule.levels[lev][i], lev, static_cast<long>(i)) * rule.levels[lev][i].w;
    sum += add;
    Cplx s_cur = sum * pow2(-lev, wp);
    Real d_cur = abs(s_cur - s_prev);
    res.value = s_cur;
    res.level = lev;
    if (d_cur <= tol) {
      res.converged = true;
      return res;
    }
    if (lev >= 2 && d_prev > tol && sqr(d_cur) <= tol * d_prev) {
      // Quadratic convergence projects the next change below target.
      res.converged = true;
      return res;
    }
    s_prev = s_cur;
    d_prev = d_cur;
  }
  return res;  // best effort, converged = false
}

}  // namespace

const QuadRule& quad_rule(mpfr_prec_t wp, long et) {
  std::lock_guard<std::mutex> lock(rule_mutex);
  auto key = std::make_pair(wp, et);
  auto it = rule_cache.find(key);
  if (it == rule_cache.end()) it = rule_cache.emplace(key, build_rule(wp, et)).first;
  return *it->second;
}

QuadResult quad_01(const QuadRule& rule, const Real& scale, const QuadFn& f) {
  return run_levels(rule, scale, f);
}

QuadResult quad_halfline(const QuadRule& rule, const Real& scale, const QuadFn& g) {
  Real inner_scale = scale / rule.T;
  QuadResult res = run_levels(rule, inner_scale, g);
  res.value *= rule.T;
  return res;
}

}  // namespace qk
