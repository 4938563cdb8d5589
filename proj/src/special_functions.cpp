#include "fas/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fas/errors.hpp"

namespace fas {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_finite_nonneg(double x, const char* what) {
  if (!std::isfinite(x) || x < 0.0)
    throw std::domain_error(std::string(what) + ": argument must be finite and >= 0");
}

// Ascending series for P(n, x); valid for x < n + 1.
double gamma_p_series(int n, double x) {
  double ap = n;
  double del = 1.0 / ap;
  double sum = del;
  for (int i = 0; i < 600; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-17)
      return sum * std::exp(-x + n * std::log(x) - std::lgamma(double(n)));
  }
  throw ConvergenceError("incomplete gamma: series did not converge");
}

// Lentz continued fraction for Q(n, x); valid for x >= n + 1.
double gamma_q_cf(int n, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - n;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 600; ++i) {
    const double an = -double(i) * (double(i) - n);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16)
      return h * std::exp(-x + n * std::log(x) - std::lgamma(double(n)));
  }
  throw ConvergenceError("incomplete gamma: continued fraction did not converge");
}

// e^{-x} I_nu(x) by the ascending power series; no cancellation, any nu,
// intended for x <= ~30.
double bessel_i_scaled_series(int nu, double x) {
  const double lt0 = nu * std::log(0.5 * x) - std::lgamma(double(nu) + 1.0) - x;
  double term = std::exp(lt0);
  double sum = term;
  const double q = 0.25 * x * x;
  for (int k = 1; k < 500; ++k) {
    term *= q / (double(k) * (double(k) + nu));
    sum += term;
    if (term < sum * 1e-17 + 1e-320) return sum;
  }
  throw ConvergenceError("bessel_i_scaled: series did not converge");
}

// e^{-x} I_nu(x), nu in {0, 1}, by the Hankel expansion with optimal
// truncation; accurate past ~1e-12 for x >= 15.
double bessel_i_scaled_asymptotic(int nu, double x) {
  const double mu = 4.0 * double(nu) * double(nu);
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 60; ++k) {
    term *= -(mu - double(2 * k - 1) * double(2 * k - 1)) / (8.0 * x * double(k));
    if (std::fabs(term) >= prev) break;
    sum += term;
    prev = std::fabs(term);
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

double i0_scaled(double x) {
  return x <= 15.0 ? bessel_i_scaled_series(0, x) : bessel_i_scaled_asymptotic(0, x);
}

// Downward Miller recurrence for nu >= 2, normalized against I_0. The
// three-term recurrence preserves the e^{-x} scaling. The start order must
// clear both the target order and the turning point at j ~ x, where the
// minimal and dominant solutions separate.
double bessel_i_scaled_miller(int nu, double x) {
  const double tox = 2.0 / x;
  const double by_order = double(nu) + std::sqrt(40.0 * nu);
  const double by_arg = 0.75 * x + 0.5 * nu + 24.0;
  const long start = 2 * long(std::max(by_order, by_arg));
  double bip = 0.0;
  double bi = 1.0;
  double ans = 0.0;
  for (long j = start; j > 0; --j) {
    const double bim = bip + double(j) * tox * bi;
    bip = bi;
    bi = bim;
    if (std::fabs(bi) > 1e250) {
      ans *= 1e-250;
      bi *= 1e-250;
      bip *= 1e-250;
    }
    if (j == nu) ans = bip;
  }
  return ans * (i0_scaled(x) / bi);
}

}  // namespace

double regularized_lower_gamma(int n, double x) {
  if (n < 1) throw std::domain_error("regularized_lower_gamma: n must be >= 1");
  require_finite_nonneg(x, "regularized_lower_gamma");
  if (x == 0.0) return 0.0;
  if (x < double(n) + 1.0) return gamma_p_series(n, x);
  return 1.0 - gamma_q_cf(n, x);
}

double regularized_upper_gamma(int n, double x) {
  if (n < 1) throw std::domain_error("regularized_upper_gamma: n must be >= 1");
  require_finite_nonneg(x, "regularized_upper_gamma");
  if (x == 0.0) return 1.0;
  if (x < double(n) + 1.0) return 1.0 - gamma_p_series(n, x);
  return gamma_q_cf(n, x);
}

double bessel_i_scaled(int nu, double x) {
  if (nu < 0) throw std::domain_error("bessel_i_scaled: nu must be >= 0");
  require_finite_nonneg(x, "bessel_i_scaled");
  if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
  if (nu <= 1)
    return x <= 15.0 ? bessel_i_scaled_series(nu, x) : bessel_i_scaled_asymptotic(nu, x);
  if (x <= 15.0) return bessel_i_scaled_series(nu, x);
  return bessel_i_scaled_miller(nu, x);
}

double bessel_i(int nu, double x) {
  const double scaled = bessel_i_scaled(nu, x);
  if (x > 700.0)
    throw std::overflow_error("bessel_i: result exceeds double range, use bessel_i_scaled");
  const double v = scaled * std::exp(x);
  if (!std::isfinite(v))
    throw std::overflow_error("bessel_i: result exceeds double range, use bessel_i_scaled");
  return v;
}

double bessel_j0(double x) {
  if (!std::isfinite(x)) throw std::domain_error("bessel_j0: argument must be finite");
  const double ax = std::fabs(x);
  if (ax <= 15.0) {
    double term = 1.0;
    double sum = 1.0;
    const double q = 0.25 * ax * ax;
    for (int k = 1; k < 120; ++k) {
      term *= -q / (double(k) * double(k));
      sum += term;
      if (std::fabs(term) < 1e-18) break;
    }
    return sum;
  }
  // Hankel expansion: J0 = sqrt(2/(pi x)) [P cos(x - pi/4) + S sin(x - pi/4)],
  // P = 1 - b2 + b4 - ..., S = b1 - b3 + ..., b_k = prod (2j-1)^2 / (k! (8x)^k).
  const double w = ax - 0.25 * kPi;
  double bk = 1.0;
  double p = 1.0;
  double s = 0.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 60; ++k) {
    bk *= double(2 * k - 1) * double(2 * k - 1) / (8.0 * ax * double(k));
    if (bk >= prev) break;
    prev = bk;
    if (k % 2 == 1)
      s += (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * bk;
    else
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * bk;
    if (bk < 1e-18) break;
  }
  return std::sqrt(2.0 / (kPi * ax)) * (p * std::cos(w) + s * std::sin(w));
}

double marcum_q(int order_n, double a, double b, const Accuracy& acc) {
  if (order_n < 1) throw std::domain_error("marcum_q: order must be >= 1");
  require_finite_nonneg(a, "marcum_q");
  require_finite_nonneg(b, "marcum_q");
  acc.validate();
  if (b == 0.0) return 1.0;

  const double x = 0.5 * a * a;  // Poisson rate of the mixture
  const double y = 0.5 * b * b;  // gamma tail argument
  if (x == 0.0) return regularized_upper_gamma(order_n, y);

  // The Poisson window spans O(sqrt(x)) terms around the mode.
  if (9.0 * std::sqrt(x) + 16.0 > double(acc.max_terms))
    throw ConvergenceError("marcum_q: max_terms too small for the Poisson window");

  const long long k0 = (long long)(x);
  const double lw0 = -x + double(k0) * std::log(x) - std::lgamma(double(k0) + 1.0);
  const double w0 = std::exp(lw0);  // weight at the mode; never underflows

  // Walk down to where the below-mode relative weight is negligible.
  long long klo = k0;
  double u_lo = 1.0;
  while (klo > 0) {
    const double u_next = u_lo * double(klo) / x;
    if (u_next < 1e-18) break;
    u_lo = u_next;
    --klo;
    if (k0 - klo > acc.max_terms)
      throw ConvergenceError("marcum_q: max_terms exceeded below the Poisson mode");
  }

  // Upward pass: gamma tails by the stable additive recurrence
  // Q(s+1, y) = Q(s, y) + e^{-y} y^s / s!.
  long long s = order_n + klo;
  double g = regularized_upper_gamma(int(s), y);
  const double ly = std::log(y);
  double d = 0.0;
  {
    const double ld = -y + double(s) * ly - std::lgamma(double(s) + 1.0);
    if (ld > -745.0) d = std::exp(ld);
  }

  double sum = 0.0;   // sum of u_k * Q(N+k, y), scaled by w0 at the end
  double mass = 0.0;  // accumulated u_k
  double u = u_lo;
  int terms = 0;
  for (long long k = klo;; ++k) {
    if (++terms > acc.max_terms) throw ConvergenceError("marcum_q: max_terms exceeded");
    sum += u * g;
    mass += u;
    if (k >= k0) {
      const double rem_complement = 1.0 - w0 * mass;
      const double ratio = x / double(k + 2);
      const double rem_geom =
          ratio < 1.0 ? w0 * u * ratio / (1.0 - ratio) : std::numeric_limits<double>::max();
      const double remaining = std::min(std::max(rem_complement, 0.0), rem_geom);
      if (remaining < acc.abs_tol) break;
    }
    u *= x / double(k + 1);
    if (d == 0.0) {
      const double ld = -y + double(s) * ly - std::lgamma(double(s) + 1.0);
      if (ld > -745.0) d = std::exp(ld);
    }
    g += d;
    if (g > 1.0) g = 1.0;
    d *= y / double(s + 1);
    ++s;
  }

  const double q = w0 * sum;
  if (q < 0.0) return 0.0;
  if (q > 1.0) return 1.0;
  return q;
}

}  // namespace fas
