#pragma once

#include <cmath>

#include "cflow/errors.hpp"

namespace cflow {

struct RootOptions {
  double x_tol = 1e-15;  // absolute bracket-width target
  int max_iter = 240;
};

// Bracketed hybrid root finder (Illinois variant of regula falsi with a
// periodic bisection safeguard). The bracket is preserved at every iteration,
// so convergence holds even when f is nearly vertical at the root (Hugoniot
// curves close to congestion) or nearly flat (rarefaction curves at small
// epsilon); the Illinois reweighting avoids the one-sided stall of plain
// false position.
template <class F>
double find_root(F&& f, double lo, double hi, RootOptions opt = {}) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::isnan(flo) || std::isnan(fhi) || (flo < 0.0) == (fhi < 0.0))
    throw NoRootError("find_root: no sign change on the bracket");
  int side = 0;
  for (int it = 0; it < opt.max_iter; ++it) {
    if (!(hi - lo > opt.x_tol)) break;
    double cand;
    if (it % 4 == 3) {
      cand = lo + 0.5 * (hi - lo);
    } else {
      cand = (lo * fhi - hi * flo) / (fhi - flo);
      if (!std::isfinite(cand) || !(cand > lo && cand < hi)) cand = lo + 0.5 * (hi - lo);
    }
    const double fc = f(cand);
    if (fc == 0.0) return cand;
    if ((fc < 0.0) == (flo < 0.0)) {
      lo = cand;
      flo = fc;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = cand;
      fhi = fc;
      if (side == +1) flo *= 0.5;
      side = +1;
    }
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace cflow
