#pragma once

#include <cmath>
#include <string>

#include "selfaction/errors.hpp"

namespace selfaction {

template <typename Real>
struct RootResult {
  Real root = 0;
  Real f_root = 0;
  Real lo = 0;
  Real hi = 0;
  int iterations = 0;
};

/// Bracketed root refinement: secant (regula falsi with the Illinois
/// modification) inside the bracket, falling back to bisection whenever the
/// bracket fails to halve over two consecutive steps. Derivative free.
template <typename Real, typename F>
RootResult<Real> bracketed_root(F&& f, Real lo, Real hi, Real x_tol, int max_iterations = 200) {
  using std::abs;
  Real f_lo = f(lo);
  Real f_hi = f(hi);
  RootResult<Real> out;
  if (f_lo == 0) return {lo, f_lo, lo, lo, 0};
  if (f_hi == 0) return {hi, f_hi, hi, hi, 0};
  if ((f_lo < 0) == (f_hi < 0)) {
    throw BracketError("bracketed_root: no sign change in [" + std::to_string(static_cast<double>(lo)) + ", " +
                       std::to_string(static_cast<double>(hi)) + "]");
  }

  int side = 0;  // which end stayed fixed last step (Illinois weighting)
  Real width_before = hi - lo;
  int slow_steps = 0;
  for (int it = 1; it <= max_iterations; ++it) {
    Real x;
    if (slow_steps >= 2) {
      x = lo + (hi - lo) / 2;
      slow_steps = 0;
    } else {
      x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
      if (!(x > lo && x < hi)) x = lo + (hi - lo) / 2;
    }
    const Real fx = f(x);
    if (fx == 0) return {x, fx, x, x, it};
    if ((fx < 0) == (f_lo < 0)) {
      lo = x;
      f_lo = fx;
      if (side == -1) f_hi /= 2;
      side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (side == +1) f_lo /= 2;
      side = +1;
    }
    const Real width = hi - lo;
    slow_steps = width > width_before / 2 ? slow_steps + 1 : 0;
    width_before = width;
    if (width <= x_tol) {
      out.root = abs(f_lo) < abs(f_hi) ? lo : hi;
      out.f_root = f(out.root);
      out.lo = lo;
      out.hi = hi;
      out.iterations = it;
      return out;
    }
  }
  throw NonConvergenceError("bracketed_root: iteration cap reached");
}

}  // namespace selfaction
