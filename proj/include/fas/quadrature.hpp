#pragma once

#include <functional>

#include "fas/accuracy.hpp"

namespace fas {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

// Adaptive Gauss-Kronrod (G7, K15) integration of f over [lo, hi]. Bisects
// the worst interval until the summed |K15 - G7| estimate meets
// min(abs_tol, rel_tol * |I|), floored at a few ulps of the L1 mass so tiny
// integrals still converge to relative accuracy. Throws ConvergenceError when
// max_subdivisions is exhausted.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    const Accuracy& acc = {}, int max_subdivisions = 2000);

}  // namespace fas
