#pragma once

#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "fas/accuracy.hpp"
#include "fas/monte_carlo.hpp"

namespace fas {

enum class Method { exact, upper_bound, lower_bound, monte_carlo };

struct OpResult {
  double value = 0.0;
  Method method = Method::exact;
  double quadrature_error = 0.0;  // 0 for closed forms
};

// The single-end upper bound circulates in two forms that differ by a factor
// of two in the exponent; both are valid upper bounds and both are exposed.
// as_printed is the looser form, as_derived the tighter Cauchy-Schwarz form.
enum class BoundVariant { as_printed, as_derived };

struct DiversityEstimate {
  double slope = 0.0;
  std::pair<double, double> fit_range{0.0, 0.0};
  double r_squared = 0.0;
};

// All outage evaluators work on the normalized SNR axis gamma_FAS/gamma_bar,
// where sigma^2 cancels identically; cfg.sigma2 therefore never changes the
// returned probabilities (it only scales the joint densities below).

// Joint density of the MISO precoding gains (X_1, ..., X_M) at z > 0
// componentwise: the Gamma(N, sigma^2) marginal of the reference port times
// the conditional noncentral-chi-square factors of the remaining ports.
double miso_joint_pdf(const MisoConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& z);

// Joint density of the dual-model channel amplitudes |h_ij| at r > 0
// componentwise: Rayleigh reference times conditional Rician factors.
double dual_joint_pdf(const DualConfig& cfg, const Eigen::Ref<const Eigen::MatrixXd>& r);

OpResult miso_exact_op(const MisoConfig& cfg, Threshold th, const Accuracy& acc = {});
OpResult miso_op_upper(const MisoConfig& cfg, Threshold th,
                       BoundVariant variant = BoundVariant::as_printed);
OpResult miso_op_lower(const MisoConfig& cfg, Threshold th);

OpResult dual_exact_op(const DualConfig& cfg, Threshold th, const Accuracy& acc = {});
OpResult dual_op_upper(const DualConfig& cfg, Threshold th);
OpResult dual_op_lower(const DualConfig& cfg, Threshold th);

// Rx-SISO-FAS special case with per-port Jakes coefficients over an aperture
// of w wavelengths; signs of the coefficients are immaterial (rho_i^2 enters).
OpResult rx_siso_fas_op(int m_r, double w, Threshold th, const Accuracy& acc = {});

// Same integral with explicit per-port coefficients rho_i for i = 2..M_R
// (vector holds rho_2..rho_{M_R}, each |rho_i| < 1).
OpResult rx_siso_fas_op(const Eigen::Ref<const Eigen::VectorXd>& port_rhos, Threshold th,
                        const Accuracy& acc = {});

// Log-log slope of an outage evaluator over n_points log-spaced thresholds in
// [fit_lo, fit_hi]. Throws DegenerateFitError when any point evaluates to
// zero, when quadrature error exceeds 10% of a value, or when r^2 < 0.99.
DiversityEstimate diversity_estimate(const std::function<OpResult(double)>& op_evaluator,
                                     double fit_lo, double fit_hi, int n_points);

}  // namespace fas
