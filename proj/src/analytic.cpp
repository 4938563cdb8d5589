#include "fas/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fas/correlation.hpp"
#include "fas/errors.hpp"
#include "fas/quadrature.hpp"
#include "fas/special_functions.hpp"

namespace fas {

namespace {

inline double clamp_unit(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// One bracket of the exact-outage integrands:
// 1 - Q_order(sqrt(2 rho^2 t / (1 - rho^2)), sqrt(2 g / (1 - rho^2))),
// accumulated in log space so (M-1)-fold powers survive large M.
struct Bracket {
  int order;
  double rho_sq;   // squared correlation coefficient of this group
  double exponent; // multiplicity of the factor
  double b;        // fixed second Marcum argument

  Bracket(int order_, double rho_sq_, double exponent_, double gamma_th)
      : order(order_),
        rho_sq(rho_sq_),
        exponent(exponent_),
        b(std::sqrt(2.0 * gamma_th / (1.0 - rho_sq_))) {}

  double log_term(double t, const Accuracy& acc) const {
    const double a = std::sqrt(2.0 * rho_sq * t / (1.0 - rho_sq));
    const double q = marcum_q(order, a, b, acc);
    return exponent * std::log1p(-q);
  }
};

OpResult integrate_outage(int gamma_order, double gamma_th, const std::vector<Bracket>& brackets,
                          const Accuracy& acc) {
  const double lg = std::lgamma(double(gamma_order));
  auto integrand = [&](double t) {
    double le = double(gamma_order - 1) * std::log(t) - t - lg;
    for (const Bracket& br : brackets) le += br.log_term(t, acc);
    return std::exp(le);
  };
  const QuadratureResult q = integrate_adaptive(integrand, 0.0, gamma_th, acc);
  return OpResult{clamp_unit(q.value), Method::exact, q.error_estimate};
}

}  // namespace

double miso_joint_pdf(const MisoConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& z) {
  cfg.validate();
  if (z.size() != cfg.m_ports)
    throw std::domain_error("miso_joint_pdf: z must have one entry per port");
  for (int m = 0; m < z.size(); ++m)
    if (!(z[m] > 0.0) || !std::isfinite(z[m]))
      throw std::domain_error("miso_joint_pdf: gains must be finite and > 0");

  const int n = cfg.n_antennas;
  const double s2 = cfg.sigma2;
  const double r2 = cfg.rho * cfg.rho;
  // Reference port: Gamma(N, sigma^2).
  double logp = double(n - 1) * std::log(z[0]) - z[0] / s2 - double(n) * std::log(s2) -
                std::lgamma(double(n));
  if (cfg.m_ports == 1) return std::exp(logp);

  const double v = s2 * (1.0 - r2);  // conditional scale
  for (int m = 1; m < cfg.m_ports; ++m) {
    if (r2 == 0.0) {
      logp += double(n - 1) * std::log(z[m]) - z[m] / s2 - double(n) * std::log(s2) -
              std::lgamma(double(n));
      continue;
    }
    // Noncentral chi-square (2N dof) conditional density of X_m given X_1:
    //   1/v * e^{-(z_m + r2 z_1)/v} (z_m/(r2 z_1))^{(N-1)/2} I_{N-1}(2 sqrt(r2 z_1 z_m)/v)
    const double arg = 2.0 * std::sqrt(r2 * z[0] * z[m]) / v;
    const double ib = bessel_i_scaled(n - 1, arg);
    // Scaled Bessel underflows only for arg << nu; fall back to the leading
    // series term in log space so the power prefactor can still cancel it.
    const double log_i = ib > 0.0
                             ? std::log(ib) + arg
                             : double(n - 1) * std::log(0.5 * arg) - std::lgamma(double(n));
    logp += -std::log(v) - (z[m] + r2 * z[0]) / v +
            0.5 * double(n - 1) * std::log(z[m] / (r2 * z[0])) + log_i;
  }
  return std::exp(logp);
}

double dual_joint_pdf(const DualConfig& cfg, const Eigen::Ref<const Eigen::MatrixXd>& r) {
  cfg.validate();
  if (r.rows() != cfg.m_r || r.cols() != cfg.m_t)
    throw std::domain_error("dual_joint_pdf: r must be M_R x M_T");
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j)
      if (!(r(i, j) > 0.0) || !std::isfinite(r(i, j)))
        throw std::domain_error("dual_joint_pdf: amplitudes must be finite and > 0");

  const double s2 = cfg.sigma2;
  const double r11 = r(0, 0);
  // Rayleigh reference amplitude.
  double logp = std::log(2.0 * r11 / s2) - r11 * r11 / s2;

  // Conditional Rician factor with coefficient c given |h_11|.
  auto rician = [&](double c, double amp) {
    const double omc = 1.0 - c * c;
    if (c == 0.0) return std::log(2.0 * amp / s2) - amp * amp / s2;
    const double arg = 2.0 * c * r11 * amp / (s2 * omc);
    const double ib = bessel_i_scaled(0, arg);
    return std::log(2.0 * amp / (s2 * omc)) - (amp * amp + c * c * r11 * r11) / (s2 * omc) +
           std::log(ib) + arg;
  };

  for (int i = 1; i < cfg.m_r; ++i) logp += rician(cfg.rho1, r(i, 0));
  for (int j = 1; j < cfg.m_t; ++j) logp += rician(cfg.rho2, r(0, j));
  for (int i = 1; i < cfg.m_r; ++i)
    for (int j = 1; j < cfg.m_t; ++j) logp += rician(cfg.rho1 * cfg.rho2, r(i, j));
  return std::exp(logp);
}

OpResult miso_exact_op(const MisoConfig& cfg, Threshold th, const Accuracy& acc) {
  cfg.validate();
  acc.validate();
  const double g = th.value();
  std::vector<Bracket> brackets;
  if (cfg.m_ports > 1)
    brackets.emplace_back(cfg.n_antennas, cfg.rho * cfg.rho, double(cfg.m_ports - 1), g);
  return integrate_outage(cfg.n_antennas, g, brackets, acc);
}

OpResult miso_op_upper(const MisoConfig& cfg, Threshold th, BoundVariant variant) {
  cfg.validate();
  const double g = th.value();
  const double c = variant == BoundVariant::as_printed ? 2.0 : 1.0;
  double logp = std::log(regularized_lower_gamma(cfg.n_antennas, g));
  if (cfg.m_ports > 1)
    logp += double(cfg.m_ports - 1) *
            std::log1p(-std::exp(-c * g / (1.0 - cfg.rho * cfg.rho)));
  return OpResult{clamp_unit(std::exp(logp)), Method::upper_bound, 0.0};
}

OpResult miso_op_lower(const MisoConfig& cfg, Threshold th) {
  cfg.validate();
  const double g = th.value();
  const double r2 = cfg.rho * cfg.rho;
  double logp = std::log(regularized_lower_gamma(cfg.n_antennas, g));
  if (cfg.m_ports > 1) {
    const double q = marcum_q(cfg.n_antennas, std::sqrt(2.0 * r2 * g / (1.0 - r2)),
                              std::sqrt(2.0 * g / (1.0 - r2)));
    logp += double(cfg.m_ports - 1) * std::log1p(-q);
  }
  return OpResult{clamp_unit(std::exp(logp)), Method::lower_bound, 0.0};
}

OpResult dual_exact_op(const DualConfig& cfg, Threshold th, const Accuracy& acc) {
  cfg.validate();
  acc.validate();
  const double g = th.value();
  const double mr1 = double(cfg.m_r - 1);
  const double mt1 = double(cfg.m_t - 1);
  std::vector<Bracket> brackets;
  if (mr1 > 0) brackets.emplace_back(1, cfg.rho1 * cfg.rho1, mr1, g);
  if (mt1 > 0) brackets.emplace_back(1, cfg.rho2 * cfg.rho2, mt1, g);
  if (mr1 > 0 && mt1 > 0) {
    const double r12 = cfg.rho1 * cfg.rho2;
    brackets.emplace_back(1, r12 * r12, mr1 * mt1, g);
  }
  return integrate_outage(1, g, brackets, acc);
}

OpResult dual_op_upper(const DualConfig& cfg, Threshold th) {
  cfg.validate();
  const double g = th.value();
  const double r1sq = cfg.rho1 * cfg.rho1;
  const double r2sq = cfg.rho2 * cfg.rho2;
  double logp = std::log1p(-std::exp(-g));
  logp += double(cfg.m_r - 1) * std::log1p(-std::exp(-g / (1.0 - r1sq)));
  logp += double(cfg.m_t - 1) * std::log1p(-std::exp(-g / (1.0 - r2sq)));
  logp += double(cfg.m_r - 1) * double(cfg.m_t - 1) *
          std::log1p(-std::exp(-g / (1.0 - r1sq * r2sq)));
  return OpResult{clamp_unit(std::exp(logp)), Method::upper_bound, 0.0};
}

OpResult dual_op_lower(const DualConfig& cfg, Threshold th) {
  cfg.validate();
  const double g = th.value();
  auto log_bracket = [&](double rho_sq, double exponent) {
    if (exponent == 0.0) return 0.0;
    const double q = marcum_q(1, std::sqrt(2.0 * rho_sq * g / (1.0 - rho_sq)),
                              std::sqrt(2.0 * g / (1.0 - rho_sq)));
    return exponent * std::log1p(-q);
  };
  const double r12 = cfg.rho1 * cfg.rho2;
  double logp = std::log1p(-std::exp(-g));
  logp += log_bracket(cfg.rho1 * cfg.rho1, double(cfg.m_r - 1));
  logp += log_bracket(cfg.rho2 * cfg.rho2, double(cfg.m_t - 1));
  logp += log_bracket(r12 * r12, double(cfg.m_r - 1) * double(cfg.m_t - 1));
  return OpResult{clamp_unit(std::exp(logp)), Method::lower_bound, 0.0};
}

OpResult rx_siso_fas_op(int m_r, double w, Threshold th, const Accuracy& acc) {
  const Eigen::VectorXd rho = jakes_coefficients(m_r, w);
  return rx_siso_fas_op(rho.tail(m_r - 1), th, acc);
}

OpResult rx_siso_fas_op(const Eigen::Ref<const Eigen::VectorXd>& port_rhos, Threshold th,
                        const Accuracy& acc) {
  acc.validate();
  const double g = th.value();
  std::vector<Bracket> brackets;
  brackets.reserve(port_rhos.size());
  for (int i = 0; i < port_rhos.size(); ++i) {
    const double r2 = port_rhos[i] * port_rhos[i];
    if (!(r2 < 1.0))
      throw std::domain_error("rx_siso_fas_op: |rho_i| must be < 1 for every active port");
    brackets.emplace_back(1, r2, 1.0, g);
  }
  return integrate_outage(1, g, brackets, acc);
}

DiversityEstimate diversity_estimate(const std::function<OpResult(double)>& op_evaluator,
                                     double fit_lo, double fit_hi, int n_points) {
  if (!(fit_lo > 0.0) || !(fit_hi > fit_lo))
    throw std::domain_error("diversity_estimate: need 0 < fit_lo < fit_hi");
  if (n_points < 4) throw std::domain_error("diversity_estimate: need n_points >= 4");

  std::vector<double> lx(n_points), ly(n_points);
  const double llo = std::log(fit_lo);
  const double lhi = std::log(fit_hi);
  for (int i = 0; i < n_points; ++i) {
    const double gamma = std::exp(llo + (lhi - llo) * double(i) / double(n_points - 1));
    const OpResult r = op_evaluator(gamma);
    if (!(r.value > 1e-300))
      throw DegenerateFitError("diversity_estimate: outage evaluated to zero");
    if (r.quadrature_error > 0.1 * r.value)
      throw DegenerateFitError("diversity_estimate: quadrature error dominates the fit range");
    lx[i] = std::log(gamma);
    ly[i] = std::log(r.value);
  }

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n_points; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n_points;
  my /= n_points;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n_points; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  DiversityEstimate est;
  est.slope = sxy / sxx;
  est.fit_range = {fit_lo, fit_hi};
  est.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  if (est.r_squared < 0.99)
    throw DegenerateFitError("diversity_estimate: fit rejected, r^2 < 0.99");
  return est;
}

}  // namespace fas
