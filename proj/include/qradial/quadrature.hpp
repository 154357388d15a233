#pragma once

#include <functional>

#include "qradial/hp.hpp"

namespace qradial {

struct QuadratureResult {
  HPReal value;
  /// Difference between the last two refinement levels.
  HPReal error_estimate;
  int levels = 0;
};

using RealFunction = std::function<HPReal(const HPReal&)>;

/// Double-exponential (tanh-sinh) rule on a finite interval [a, b]. Abscissae
/// near either endpoint are formed from their distance to it, so integrable
/// endpoint singularities are handled. Refines until successive levels agree
/// to `tolerance` (absolute) or `max_levels` is reached.
QuadratureResult tanh_sinh(const RealFunction& f, const HPReal& a, const HPReal& b, const HPReal& tolerance,
                           int max_levels = 12);

/// Double-exponential (exp-sinh) rule on [a, inf) for integrands that decay at infinity.
QuadratureResult exp_sinh(const RealFunction& f, const HPReal& a, const HPReal& tolerance, int max_levels = 12);

}  // namespace qradial
