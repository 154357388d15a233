#include "qradial/quadrature.hpp"

#include <cstdlib>
#include <string>

#include "qradial/errors.hpp"

namespace qradial {

namespace {

// Contribution of the nodes t = k h, k = first, first + step, ... (both signs).
// Stops once contributions are negligible against the running sum, which keeps
// going into integrable endpoint singularities where weight * f stays large
// long after the weight alone is tiny, or once nodes stop moving at precision wp.
HPReal tanh_sinh_pass(const RealFunction& f, const HPReal& a, const HPReal& b, const HPReal& h, long first,
                      long step, Precision wp) {
  const HPReal half_pi = pi(wp) / 2;
  const HPReal half_width = (b - a) / 2;
  const HPReal negligible = unit_roundoff(wp.guarded(8));
  HPReal sum(wp);
  int quiet = 0;
  for (long k = first;; k += step) {
    const HPReal t = h * k;
    const HPReal u = half_pi * sinh(t);
    // Offset of the abscissa from each endpoint, in units of the half width.
    const HPReal complement = 2L / (1L + exp(u * 2L));
    const HPReal cosh_u = cosh(u);
    const HPReal weight = half_pi * cosh(t) / (cosh_u * cosh_u);
    if (k == 0) {
      sum += weight * f((a + b) / 2);
      continue;
    }
    const HPReal offset = half_width * complement;
    const HPReal left = a + offset;
    const HPReal right = b - offset;
    if (complement.is_zero() || (left == a && right == b)) break;
    const HPReal c = weight * (f(left) + f(right));
    if (!c.is_finite()) throw Error("tanh_sinh: integrand not finite at node " + std::to_string(k));
    sum += c;
    if (abs(c) <= abs(sum) * negligible) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
  }
  return sum * half_width;
}

HPReal exp_sinh_pass(const RealFunction& f, const HPReal& a, const HPReal& h, bool odd_only, Precision wp) {
  const HPReal half_pi = pi(wp) / 2;
  const HPReal negligible = unit_roundoff(wp.guarded(8));
  const long step = odd_only ? 2 : 1;
  HPReal sum(wp);
  auto contribution = [&](long k) {
    const HPReal t = h * k;
    const HPReal x_offset = exp(half_pi * sinh(t));
    return half_pi * cosh(t) * x_offset * f(a + x_offset);
  };
  if (!odd_only) sum += contribution(0);
  // Walk outward in both directions; stop once several consecutive
  // contributions are negligible against the running sum.
  for (long direction : {1L, -1L}) {
    int quiet = 0;
    for (long k = direction; std::abs(k) < 100000; k += direction * step) {
      HPReal c = contribution(k);
      if (!c.is_finite()) throw Error("exp_sinh: integrand not finite at node " + std::to_string(k));
      sum += c;
      if (abs(c) <= max(abs(sum), negligible) * negligible) {
        if (++quiet >= 3) break;
      } else {
        quiet = 0;
      }
    }
  }
  return sum;
}

}  // namespace

QuadratureResult tanh_sinh(const RealFunction& f, const HPReal& a, const HPReal& b, const HPReal& tolerance,
                           int max_levels) {
  const Precision wp = max(a.precision(), b.precision());
  HPReal h(1L, wp);
  // Level 0: all integer nodes including the centre.
  HPReal estimate = tanh_sinh_pass(f, a, b, h, 0, 1, wp) * h;
  HPReal error(wp);
  int level = 0;
  while (level < max_levels) {
    ++level;
    h /= 2L;
    HPReal odd = tanh_sinh_pass(f, a, b, h, 1, 2, wp);
    HPReal refined = estimate / 2 + odd * h;
    error = abs(refined - estimate);
    estimate = std::move(refined);
    if (level >= 3 && error <= tolerance) break;
  }
  return {std::move(estimate), std::move(error), level};
}

QuadratureResult exp_sinh(const RealFunction& f, const HPReal& a, const HPReal& tolerance, int max_levels) {
  const Precision wp = a.precision();
  HPReal h(1L, wp);
  HPReal estimate = exp_sinh_pass(f, a, h, false, wp) * h;
  HPReal error(wp);
  int level = 0;
  while (level < max_levels) {
    ++level;
    h /= 2L;
    HPReal odd = exp_sinh_pass(f, a, h, true, wp);
    HPReal refined = estimate / 2 + odd * h;
    error = abs(refined - estimate);
    estimate = std::move(refined);
    if (level >= 3 && error <= tolerance) break;
  }
  return {std::move(estimate), std::move(error), level};
}

}  // namespace qradial
