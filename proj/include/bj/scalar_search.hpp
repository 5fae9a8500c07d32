#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "bj/errors.hpp"

namespace bj {

struct LineMinResult {
  double argmin = 0.0;
  double value = 0.0;
  int evals = 0;
};

/// Minimize a convex (possibly piecewise-linear) function on [lo, hi] by
/// golden-section search down to rel_shrink * (hi - lo), then one parabolic
/// polish step through the final three-point stencil. Tracks the best point
/// ever evaluated, so the result never exceeds any probed value.
template <typename F>
LineMinResult golden_min(F&& f, double lo, double hi, double rel_shrink = 1e-12,
                         int max_iter = 200) {
  if (!(lo <= hi)) std::swap(lo, hi);
  LineMinResult best;
  auto eval = [&](double t) {
    const double v = f(t);
    ++best.evals;
    return v;
  };
  const double phi = 0.6180339887498948482;  // 1/golden ratio
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = eval(c), fd = eval(d);
  best = fc <= fd ? LineMinResult{c, fc, best.evals} : LineMinResult{d, fd, best.evals};
  const double width_goal = rel_shrink * (hi - lo);
  for (int i = 0; i < max_iter && (b - a) > width_goal; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = eval(d);
    }
    const double t = fc <= fd ? c : d;
    const double v = std::min(fc, fd);
    if (v < best.value) {
      best.argmin = t;
      best.value = v;
    }
  }
  // Parabolic polish through (a, c/d, b); ignored when degenerate.
  {
    const double x1 = a, x2 = best.argmin, x3 = b;
    const double f1 = eval(x1), f2 = best.value, f3 = eval(x3);
    const double num = (x2 - x1) * (x2 - x1) * (f2 - f3) - (x2 - x3) * (x2 - x3) * (f2 - f1);
    const double den = (x2 - x1) * (f2 - f3) - (x2 - x3) * (f2 - f1);
    if (std::abs(den) > 1e-300) {
      const double cand = x2 - 0.5 * num / den;
      if (cand > lo && cand < hi && std::isfinite(cand)) {
        const double fv = eval(cand);
        if (fv < best.value) {
          best.argmin = cand;
          best.value = fv;
        }
      }
    }
  }
  // Endpoints are feasible minimizers too.
  {
    const double fl = eval(lo);
    if (fl < best.value) {
      best.argmin = lo;
      best.value = fl;
    }
    const double fh = eval(hi);
    if (fh < best.value) {
      best.argmin = hi;
      best.value = fh;
    }
  }
  return best;
}

struct DerivativeBisectResult {
  double argzero = 0.0;
  bool found = false;  // derivative sign criterion met (d- <= 0 <= d+)
};

/// For a convex function with one-sided derivative oracle g(t) = (d-, d+),
/// locate t with d-(t) <= 0 <= d+(t) by bisection. The bracket must satisfy
/// d+(lo) <= 0 and d-(hi) >= 0; both derivative maps are nondecreasing.
template <typename G>
DerivativeBisectResult bisect_on_derivative(G&& g, double lo, double hi, double slack = 0.0,
                                            int max_iter = 200) {
  auto sides = [&](double t) { return g(t); };
  auto [dlo_m, dlo_p] = sides(lo);
  if (dlo_m <= slack && dlo_p >= -slack) return {lo, true};
  auto [dhi_m, dhi_p] = sides(hi);
  if (dhi_m <= slack && dhi_p >= -slack) return {hi, true};
  if (dlo_p > slack || dhi_m < -slack)
    throw numeric_failure("derivative bisection bracket does not straddle the minimum");
  double a = lo, b = hi;
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (a + b);
    auto [dm, dp] = sides(mid);
    if (dm <= slack && dp >= -slack) return {mid, true};
    if (dm > 0.0)
      b = mid;
    else
      a = mid;
    if (b - a < 1e-15 * std::max(1.0, std::abs(a) + std::abs(b))) break;
  }
  return {0.5 * (a + b), false};
}

}  // namespace bj
