#pragma once

#include <cmath>
#include <string>

#include "dpbinom/errors.hpp"

namespace dpbinom::detail {

// Finds x with g(x) = target for continuous strictly decreasing g.
// Expands [lo, hi] geometrically until it brackets the target (at most
// max_expansions steps per side), then bisects to the x tolerance and
// verifies the residual.
template <class F>
double solve_decreasing(F&& g, double target, double lo, double hi,
                        int max_expansions, double xtol, double ytol,
                        const char* what) {
  double step = hi - lo > 1.0 ? hi - lo : 1.0;
  for (int i = 0; g(lo) < target; ++i) {
    if (i >= max_expansions) throw ConvergenceError(std::string(what) + ": no lower bracket");
    lo -= step;
    step *= 2.0;
  }
  step = hi - lo > 1.0 ? hi - lo : 1.0;
  for (int i = 0; g(hi) > target; ++i) {
    if (i >= max_expansions) throw ConvergenceError(std::string(what) + ": no upper bracket");
    hi += step;
    step *= 2.0;
  }
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  const double x = 0.5 * (lo + hi);
  if (std::fabs(g(x) - target) > ytol)
    throw ConvergenceError(std::string(what) + ": residual above tolerance");
  return x;
}

}  // namespace dpbinom::detail
