#pragma once

#include <functional>
#include <vector>

#include "qknot/cplx.hpp"

namespace qk {

// One tanh-sinh abscissa on (0,1): x is the node, w the weight without the
// step factor. For truncated half-line integrals t = T*x and E = e^{2 pi t}
// are precomputed alongside.
struct QuadNode {
  Real x, w, t, E;
};

// Nested tanh-sinh rule. levels[0] is the unit-step grid; level L holds the
// nodes new at step 2^{-L} (odd multiples). Immutable once built and shared.
struct QuadRule {
  mpfr_prec_t wp;  // precision the nodes carry
  long et;         // error target 2^{-et} for accepted integrals
  Real T;          // half-line truncation point
  long max_level;
  std::vector<std::vector<QuadNode>> levels;
};

// Cached rule, keyed on (wp, et).
const QuadRule& quad_rule(mpfr_prec_t wp, long et);

struct QuadResult {
  Cplx value;
  bool converged = false;
  long level = 0;
};

// Integrand callback: receives the node plus its (level, index) position so
// callers can maintain parallel per-node tables.
using QuadFn = std::function<Cplx(const QuadNode&, long, long)>;

// Integral of f over x in (0,1). Levels are added until the change, or its
// quadratic extrapolation, drops below 2^{-et} * scale.
QuadResult quad_01(const QuadRule& rule, const Real& scale, const QuadFn& f);

// Integral of g over t in (0, inf) for integrands decaying like e^{-2 pi t},
// truncated at rule.T; g reads node.t and node.E.
QuadResult quad_halfline(const QuadRule& rule, const Real& scale, const QuadFn& g);

}  // namespace qk
