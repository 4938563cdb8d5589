#pragma once

#include "fas/accuracy.hpp"

namespace fas {

// Regularized lower incomplete gamma P(n, x) = gamma(n, x) / (n-1)! for
// integer n >= 1. Series for x < n+1, continued fraction for x >= n+1.
double regularized_lower_gamma(int n, double x);

// Regularized upper incomplete gamma Q(n, x) = 1 - P(n, x), computed on the
// branch that avoids cancellation.
double regularized_upper_gamma(int n, double x);

// Modified Bessel function of the first kind, integer order nu >= 0, x >= 0.
// Throws std::overflow_error once e^x swamps the double range; densities
// should use bessel_i_scaled instead.
double bessel_i(int nu, double x);

// e^{-x} I_nu(x); finite for all finite x >= 0.
double bessel_i_scaled(int nu, double x);

// Bessel function of the first kind, order zero, any finite x.
double bessel_j0(double x);

// Generalized Marcum Q-function Q_N(a, b): tail probability of a noncentral
// chi-square with 2N degrees of freedom and noncentrality a^2 above b^2.
// Evaluated as the Poisson mixture of regularized upper gamma tails
//   Q_N(a,b) = sum_k e^{-a^2/2} (a^2/2)^k / k! * Q(N+k, b^2/2),
// summed outward from the Poisson mode, truncated when the remaining Poisson
// mass is below acc.abs_tol. Throws ConvergenceError if acc.max_terms is hit.
double marcum_q(int order_n, double a, double b, const Accuracy& acc = {});

}  // namespace fas
