#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fas/analytic.hpp"
#include "fas/errors.hpp"
#include "fas/special_functions.hpp"
#include "oracles.hpp"

using namespace fas;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("miso_joint_pdf: reference marginal and degenerate cases") {
  // M = 1, N = 1: plain exponential density.
  MisoConfig cfg{1, 1, 0.3, 1.0};
  Eigen::VectorXd z(1);
  z << 1.3;
  CHECK(miso_joint_pdf(cfg, z) == doctest::Approx(std::exp(-1.3)).epsilon(1e-12));
  cfg.sigma2 = 2.0;
  CHECK(miso_joint_pdf(cfg, z) == doctest::Approx(std::exp(-0.65) / 2.0).epsilon(1e-12));

  CHECK_THROWS_AS(miso_joint_pdf(MisoConfig{1, 2, 0.5, 1.0}, z), std::domain_error);
  CHECK_THROWS_AS(miso_joint_pdf(MisoConfig{1, 1, 0.5, 1.0}, vec2(1.0, 1.0)),
                  std::domain_error);
  CHECK_THROWS_AS(miso_joint_pdf(MisoConfig{1, 2, 0.5, 1.0}, vec2(1.0, -1.0)),
                  std::domain_error);
}

TEST_CASE("miso_joint_pdf matches finite differences of the conditional CDF") {
  // The conditional law of X_m given X_1 = z1 has CDF
  // 1 - Q_N(sqrt(2 rho^2 z1 / (1-rho^2)), sqrt(2 z2 / (1-rho^2))); its z2
  // derivative times the Gamma marginal is the joint density.
  for (const auto& [n, rho, z1, z2] :
       std::vector<std::tuple<int, double, double, double>>{{1, 0.5, 1.0, 1.0},
                                                            {2, 0.5, 1.2, 0.8},
                                                            {3, 0.8, 2.0, 1.5},
                                                            {1, 0.9, 0.4, 2.2}}) {
    const MisoConfig cfg{n, 2, rho, 1.0};
    const double r2 = rho * rho;
    const double a = std::sqrt(2.0 * r2 * z1 / (1.0 - r2));
    auto cdf = [&](double t) {
      return 1.0 - marcum_q(n, a, std::sqrt(2.0 * t / (1.0 - r2)));
    };
    const double h = 1e-5;
    const double marginal =
        std::exp((n - 1) * std::log(z1) - z1 - std::lgamma(double(n)));
    const double want = marginal * (cdf(z2 + h) - cdf(z2 - h)) / (2.0 * h);
    CHECK(miso_joint_pdf(cfg, vec2(z1, z2)) == doctest::Approx(want).epsilon(1e-7));
  }
  // Frozen anchors for two of the cases above.
  CHECK(miso_joint_pdf(MisoConfig{1, 2, 0.5, 1.0}, vec2(1.0, 1.0)) ==
        doctest::Approx(0.13862733892860082).epsilon(1e-11));
  CHECK(miso_joint_pdf(MisoConfig{2, 2, 0.5, 1.0}, vec2(1.2, 0.8)) ==
        doctest::Approx(0.1457475702649698).epsilon(1e-11));
}

TEST_CASE("miso_joint_pdf: vanishing correlation factorizes into Gamma densities") {
  const MisoConfig cfg{2, 2, 1e-8, 1.0};
  const double z1 = 0.9, z2 = 1.7;
  const auto gamma2 = [](double z) { return z * std::exp(-z); };
  const double want = gamma2(z1) * gamma2(z2);
  CHECK(miso_joint_pdf(cfg, vec2(z1, z2)) == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("miso_joint_pdf: conditional slice integrates to the Gamma marginal") {
  const MisoConfig cfg{2, 2, 0.6, 1.0};
  const double z1 = 1.1;
  auto slice = [&](double z2) { return miso_joint_pdf(cfg, vec2(z1, z2)); };
  const double integral = oracles::adaptive_simpson(slice, 1e-12, 60.0, 1e-12);
  const double marginal = z1 * std::exp(-z1);
  CHECK(integral == doctest::Approx(marginal).epsilon(1e-8));
}

TEST_CASE("dual_joint_pdf: Rayleigh reference, factorization, marginalization") {
  {
    DualConfig cfg{1, 1, 0.2, 0.3, 1.0};
    Eigen::MatrixXd r(1, 1);
    r << 0.8;
    CHECK(dual_joint_pdf(cfg, r) ==
          doctest::Approx(2.0 * 0.8 * std::exp(-0.64)).epsilon(1e-12));
  }
  {
    // rho -> 0: product of independent Rayleigh densities.
    DualConfig cfg{2, 2, 1e-8, 1e-8, 1.0};
    Eigen::MatrixXd r(2, 2);
    r << 0.5, 1.0, 1.5, 0.7;
    double want = 1.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) want *= 2.0 * r(i, j) * std::exp(-r(i, j) * r(i, j));
    CHECK(dual_joint_pdf(cfg, r) == doctest::Approx(want).epsilon(1e-6));
  }
  {
    // bivariate case: integrating out the second amplitude recovers the
    // Rayleigh marginal of the first (the conditional Rician normalizes).
    DualConfig cfg{1, 2, 0.6, 0.0, 1.0};
    const double r11 = 0.9;
    auto slice = [&](double r21) {
      Eigen::MatrixXd r(2, 1);
      r << r11, r21;
      return dual_joint_pdf(cfg, r);
    };
    const double integral = oracles::adaptive_simpson(slice, 1e-12, 12.0, 1e-13);
    CHECK(integral == doctest::Approx(2.0 * r11 * std::exp(-r11 * r11)).epsilon(1e-9));
  }
  {
    // finite-difference cross-check against the Rician power CDF bracket
    DualConfig cfg{1, 2, 0.6, 0.0, 1.0};
    const double r11 = 0.9, r21 = 1.1;
    const double c2 = 0.36;
    const double a = std::sqrt(2.0 * c2 * r11 * r11 / (1.0 - c2));
    auto amp_cdf = [&](double amp) {
      return 1.0 - marcum_q(1, a, std::sqrt(2.0 * amp * amp / (1.0 - c2)));
    };
    const double h = 1e-5;
    const double want =
        2.0 * r11 * std::exp(-r11 * r11) * (amp_cdf(r21 + h) - amp_cdf(r21 - h)) / (2.0 * h);
    Eigen::MatrixXd r(2, 1);
    r << r11, r21;
    CHECK(dual_joint_pdf(cfg, r) == doctest::Approx(want).epsilon(1e-7));
  }
  {
    DualConfig cfg{2, 2, 0.5, 0.5, 1.0};
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 1.0, -0.5, 1.0;
    CHECK_THROWS_AS(dual_joint_pdf(cfg, bad), std::domain_error);
  }
}

TEST_CASE("miso_exact_op: closed-form anchors") {
  CHECK(miso_exact_op({1, 1, 0.0, 1.0}, Threshold::linear(0.7)).value ==
        doctest::Approx(-std::expm1(-0.7)).epsilon(1e-10));
  CHECK(miso_exact_op({2, 1, 0.9, 1.0}, Threshold::linear(1.0)).value ==
        doctest::Approx(1.0 - 2.0 * std::exp(-1.0)).epsilon(1e-10));
  // independent ports: P(N, g)^M
  const double p = regularized_lower_gamma(3, 1.2);
  CHECK(miso_exact_op({3, 4, 0.0, 1.0}, Threshold::linear(1.2)).value ==
        doctest::Approx(std::pow(p, 4)).epsilon(1e-10));
  // frozen cross-tool anchor
  CHECK(miso_exact_op({2, 3, 0.9, 1.0}, Threshold::linear(1.0)).value ==
        doctest::Approx(0.11943554069918466).epsilon(1e-8));
  // sigma2 does not move the normalized outage
  CHECK(miso_exact_op({2, 3, 0.9, 4.0}, Threshold::linear(1.0)).value ==
        doctest::Approx(0.11943554069918466).epsilon(1e-8));
  // the log-domain power survives very large port counts
  const OpResult big = miso_exact_op({2, 500, 0.9, 1.0}, Threshold::linear(1.0));
  CHECK(big.value >= 0.0);
  CHECK(big.value <= miso_exact_op({2, 50, 0.9, 1.0}, Threshold::linear(1.0)).value + 1e-12);
  CHECK(std::isfinite(big.value));
}

TEST_CASE("miso bounds: anchors and closed forms") {
  // M = 1 collapses every expression to P(N, g).
  const double p21 = regularized_lower_gamma(2, 1.0);
  CHECK(miso_op_upper({2, 1, 0.7, 1.0}, Threshold::linear(1.0)).value ==
        doctest::Approx(p21).epsilon(1e-12));
  CHECK(miso_op_lower({2, 1, 0.7, 1.0}, Threshold::linear(1.0)).value ==
        doctest::Approx(p21).epsilon(1e-12));

  // hand-evaluated closed forms, N=2 M=10 rho=0.5 g=1
  CHECK(miso_op_upper({2, 10, 0.5, 1.0}, Threshold::linear(1.0), BoundVariant::as_printed)
            .value == doctest::Approx(0.13820294857321214).epsilon(1e-12));
  CHECK(miso_op_upper({2, 10, 0.5, 1.0}, Threshold::linear(1.0), BoundVariant::as_derived)
            .value == doctest::Approx(0.016828275228081745).epsilon(1e-12));
  CHECK(miso_op_lower({2, 5, 0.5, 1.0}, Threshold::linear(1.0)).value ==
        doctest::Approx(0.002559022382333851).epsilon(1e-11));

  // rho -> 0 specializations
  CHECK(miso_op_upper({2, 3, 0.0, 1.0}, Threshold::linear(0.8), BoundVariant::as_derived)
            .value ==
        doctest::Approx(regularized_lower_gamma(2, 0.8) * std::pow(-std::expm1(-0.8), 2))
            .epsilon(1e-12));
  const double q0 = marcum_q(2, 0.0, std::sqrt(2.0 * 0.8));
  CHECK(miso_op_lower({2, 3, 0.0, 1.0}, Threshold::linear(0.8)).value ==
        doctest::Approx(regularized_lower_gamma(2, 0.8) * std::pow(1.0 - q0, 2))
            .epsilon(1e-12));
}

TEST_CASE("miso sandwich and monotonicity across the full parameter grid") {
  const std::vector<int> ns{1, 2, 4};
  const std::vector<int> ms{1, 2, 5, 10, 50};
  const std::vector<double> rhos{0.0, 0.5, 0.8, 0.9, 0.99};
  const std::vector<double> gammas{0.1, 0.5, 1.0, 2.0, 4.0};
  for (int n : ns)
    for (double rho : rhos)
      for (double g : gammas) {
        double prev_in_m = 2.0;
        for (int m : ms) {
          const MisoConfig cfg{n, m, rho, 1.0};
          const Threshold th = Threshold::linear(g);
          const OpResult exact = miso_exact_op(cfg, th);
          const double lo = miso_op_lower(cfg, th).value;
          const double up_derived = miso_op_upper(cfg, th, BoundVariant::as_derived).value;
          const double up_printed = miso_op_upper(cfg, th, BoundVariant::as_printed).value;
          CHECK(exact.value >= 0.0);
          CHECK(exact.value <= 1.0);
          CHECK(exact.quadrature_error >= 0.0);
          CHECK(lo <= exact.value + 1e-9);
          CHECK(exact.value <= up_derived + 1e-9);
          CHECK(up_derived <= up_printed + 1e-9);
          CHECK(exact.value <= prev_in_m + 1e-9);  // nonincreasing in M
          prev_in_m = exact.value;
        }
      }
  // nondecreasing in gamma_th and in rho
  for (int n : {1, 2})
    for (int m : {2, 10}) {
      double prev = -1.0;
      for (double g : gammas) {
        const double v = miso_exact_op({n, m, 0.8, 1.0}, Threshold::linear(g)).value;
        CHECK(v >= prev - 1e-9);
        prev = v;
      }
      prev = -1.0;
      for (double rho : rhos) {
        const double v = miso_exact_op({n, m, rho, 1.0}, Threshold::linear(1.0)).value;
        CHECK(v >= prev - 1e-9);  // lower correlation -> lower outage
        prev = v;
      }
    }
}

TEST_CASE("dual_exact_op: closed-form anchors") {
  CHECK(dual_exact_op({1, 1, 0.5, 0.5, 1.0}, Threshold::linear(std::log(2.0))).value ==
        doctest::Approx(0.5).epsilon(1e-10));
  // i.i.d. limit at vanishing correlation
  CHECK(dual_exact_op({2, 2, 1e-8, 1e-8, 1.0}, Threshold::linear(1.0)).value ==
        doctest::Approx(std::pow(-std::expm1(-1.0), 4)).epsilon(1e-6));
  CHECK(dual_exact_op({2, 2, 0.0, 0.0, 1.0}, Threshold::linear(1.0)).value ==
        doctest::Approx(std::pow(-std::expm1(-1.0), 4)).epsilon(1e-10));
  // frozen cross-tool anchors
  CHECK(dual_exact_op({10, 3, 0.9, 0.9, 1.0}, Threshold::linear(1.0)).value ==
        doctest::Approx(0.03598676653534981).epsilon(1e-8));
  CHECK(dual_exact_op({2, 3, 0.9, 0.8, 1.0}, Threshold::linear(1.0)).value ==
        doctest::Approx(0.24126391072232053).epsilon(1e-8));
}

TEST_CASE("dual bounds: anchors and tightness at independence") {
  const Threshold th = Threshold::linear(1.0);
  CHECK(dual_op_upper({1, 1, 0.5, 0.5, 1.0}, th).value ==
        doctest::Approx(-std::expm1(-1.0)).epsilon(1e-12));
  CHECK(dual_op_lower({1, 1, 0.5, 0.5, 1.0}, th).value ==
        doctest::Approx(-std::expm1(-1.0)).epsilon(1e-12));

  // both bounds are exact at rho = 0
  const double iid = std::pow(-std::expm1(-1.0), 4);
  CHECK(dual_op_upper({2, 2, 0.0, 0.0, 1.0}, th).value == doctest::Approx(iid).epsilon(1e-12));
  CHECK(dual_op_lower({2, 2, 0.0, 0.0, 1.0}, th).value == doctest::Approx(iid).epsilon(1e-12));

  // frozen closed forms, M_R=3 M_T=2 rho1=0.9 rho2=0.8 g=1
  CHECK(dual_op_upper({2, 3, 0.9, 0.8, 1.0}, th).value ==
        doctest::Approx(0.4487975748629918).epsilon(1e-12));
  CHECK(dual_op_lower({2, 3, 0.9, 0.8, 1.0}, th).value ==
        doctest::Approx(0.04303283135617653).epsilon(1e-11));
}

TEST_CASE("dual sandwich and monotonicity across the full parameter grid") {
  const std::vector<int> ports{1, 2, 3, 5, 10};
  const std::vector<double> rhos{0.0, 0.5, 0.9, 0.99};
  const std::vector<double> gammas{0.1, 0.5, 1.0, 2.0, 4.0};
  for (int mr : ports)
    for (int mt : ports)
      for (double r1 : rhos)
        for (double r2 : rhos)
          for (double g : gammas) {
            const DualConfig cfg{mt, mr, r1, r2, 1.0};
            const Threshold th = Threshold::linear(g);
            const OpResult exact = dual_exact_op(cfg, th);
            CHECK(exact.value >= 0.0);
            CHECK(exact.value <= 1.0);
            CHECK(dual_op_lower(cfg, th).value <= exact.value + 1e-9);
            CHECK(exact.value <= dual_op_upper(cfg, th).value + 1e-9);
          }
  // monotone in ports and correlation
  double prev = 2.0;
  for (int mr : ports) {
    const double v = dual_exact_op({2, mr, 0.9, 0.5, 1.0}, Threshold::linear(1.0)).value;
    CHECK(v <= prev + 1e-9);
    prev = v;
  }
  prev = 2.0;
  for (int mt : ports) {
    const double v = dual_exact_op({mt, 2, 0.9, 0.5, 1.0}, Threshold::linear(1.0)).value;
    CHECK(v <= prev + 1e-9);
    prev = v;
  }
  prev = -1.0;
  for (double r1 : rhos) {
    const double v = dual_exact_op({2, 3, r1, 0.5, 1.0}, Threshold::linear(1.0)).value;
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
}

TEST_CASE("special-case chain: dual with one transmit port equals single-antenna miso") {
  for (const auto& [m, rho, g] : std::vector<std::tuple<int, double, double>>{
           {3, 0.7, 1.0}, {5, 0.9, 2.0}, {2, 0.3, 0.4}, {10, 0.99, 1.0}}) {
    const double dual = dual_exact_op({1, m, rho, 0.37, 1.0}, Threshold::linear(g)).value;
    const double miso = miso_exact_op({1, m, rho, 1.0}, Threshold::linear(g)).value;
    CHECK(dual == doctest::Approx(miso).epsilon(1e-9));
  }
}

TEST_CASE("correlation collapse toward a single effective port as rho -> 1") {
  // The gap to the single-port value shrinks like the sqrt(1 - rho^2)
  // boundary layer, so the 1e-3 budget needs small thresholds or few ports.
  for (const auto& [n, m, g] : std::vector<std::tuple<int, int, double>>{
           {2, 2, 0.1}, {2, 3, 0.1}, {4, 2, 1.0}}) {
    const double single = regularized_lower_gamma(n, g);
    const double near = miso_exact_op({n, m, 0.9999, 1.0}, Threshold::linear(g)).value;
    CHECK(std::fabs(near - single) < 1e-3);
    const double mid = miso_exact_op({n, m, 0.99, 1.0}, Threshold::linear(g)).value;
    CHECK(std::fabs(near - single) < std::fabs(mid - single));
  }
  // The dual model approaches its single-pair value monotonically as well.
  const double single = -std::expm1(-1.0);
  const double d99 =
      std::fabs(dual_exact_op({2, 2, 0.99, 0.99, 1.0}, Threshold::linear(1.0)).value - single);
  const double d9999 = std::fabs(
      dual_exact_op({2, 2, 0.9999, 0.9999, 1.0}, Threshold::linear(1.0)).value - single);
  CHECK(d9999 < d99);
  CHECK(d9999 < 1e-2);
}

TEST_CASE("rx_siso_fas_op: anchors and equivalences") {
  const Threshold th = Threshold::linear(1.0);
  // all-zero coefficients: i.i.d. selection combining over D = 4 ports
  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(3);
  CHECK(rx_siso_fas_op(zeros, th).value ==
        doctest::Approx(std::pow(-std::expm1(-1.0), 4)).epsilon(1e-10));

  // two ports, half-wavelength aperture: same integral as the dual model with
  // a single transmit port and rho1 = |J0(pi)|
  const double j0pi = std::fabs(bessel_j0(M_PI));
  CHECK(rx_siso_fas_op(2, 0.5, th).value ==
        doctest::Approx(dual_exact_op({1, 2, j0pi, 0.0, 1.0}, th).value).epsilon(1e-9));
  CHECK(rx_siso_fas_op(2, 0.5, th).value ==
        doctest::Approx(0.41239639454661164).epsilon(1e-8));
  CHECK(rx_siso_fas_op(3, 1.0, th).value ==
        doctest::Approx(0.26505458767436874).epsilon(1e-8));

  // negative Jakes coefficients only enter squared: flipping signs is a no-op
  Eigen::VectorXd signs(2);
  signs << 0.5, -0.5;
  Eigen::VectorXd pos(2);
  pos << 0.5, 0.5;
  CHECK(rx_siso_fas_op(signs, th).value ==
        doctest::Approx(rx_siso_fas_op(pos, th).value).epsilon(1e-12));

  Eigen::VectorXd bad(1);
  bad << 1.0;
  CHECK_THROWS_AS(rx_siso_fas_op(bad, th), std::domain_error);
  CHECK_THROWS_AS(rx_siso_fas_op(1, 0.5, th), std::domain_error);
}

TEST_CASE("diversity_estimate: slopes of exact curves and of the upper bound") {
  auto miso_eval = [](const MisoConfig cfg) {
    return [cfg](double g) { return miso_exact_op(cfg, Threshold::linear(g)); };
  };
  auto dual_eval = [](const DualConfig cfg) {
    return [cfg](double g) { return dual_exact_op(cfg, Threshold::linear(g)); };
  };

  // single antenna, single port: P_out ~ gamma
  const DiversityEstimate base = diversity_estimate(miso_eval({1, 1, 0.0, 1.0}), 1e-3, 1e-2, 8);
  CHECK(base.slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(base.r_squared >= 0.99);

  // The exact single-end curve carries the small-threshold exponent N*M (each
  // conditional bracket contributes gamma^N); measured here for regression.
  const DiversityEstimate m22 = diversity_estimate(miso_eval({2, 2, 0.5, 1.0}), 1e-3, 1e-2, 8);
  CHECK(m22.slope == doctest::Approx(4.0).epsilon(0.05));
  const DiversityEstimate m23 = diversity_estimate(miso_eval({2, 3, 0.5, 1.0}), 1e-3, 1e-2, 8);
  CHECK(m23.slope == doctest::Approx(6.0).epsilon(0.05));

  // The N+M-1 exponent belongs to the closed-form upper bound the slope
  // analysis is carried out on.
  const MisoConfig ub_cfg{2, 3, 0.5, 1.0};
  const DiversityEstimate ub = diversity_estimate(
      [&](double g) { return miso_op_upper(ub_cfg, Threshold::linear(g)); }, 1e-3, 1e-2, 8);
  CHECK(ub.slope == doctest::Approx(4.0).epsilon(0.02));

  // Dual-end slopes equal the port product.
  const DiversityEstimate d22 =
      diversity_estimate(dual_eval({2, 2, 0.5, 0.5, 1.0}), 1e-3, 1e-2, 8);
  CHECK(d22.slope == doctest::Approx(4.0).epsilon(0.075));
  const DiversityEstimate d23 =
      diversity_estimate(dual_eval({3, 2, 0.5, 0.5, 1.0}), 1e-3, 1e-2, 8);
  CHECK(d23.slope == doctest::Approx(6.0).epsilon(0.05));

  CHECK_THROWS_AS(diversity_estimate(miso_eval({1, 1, 0.0, 1.0}), 1e-2, 1e-3, 8),
                  std::domain_error);
  CHECK_THROWS_AS(diversity_estimate(miso_eval({1, 1, 0.0, 1.0}), 1e-3, 1e-2, 3),
                  std::domain_error);
  // quadrature error dominating the value must be refused
  auto noisy = [](double) { return OpResult{1e-6, Method::exact, 1e-6}; };
  CHECK_THROWS_AS(diversity_estimate(noisy, 1e-3, 1e-2, 8), DegenerateFitError);
  auto zero = [](double) { return OpResult{0.0, Method::exact, 0.0}; };
  CHECK_THROWS_AS(diversity_estimate(zero, 1e-3, 1e-2, 8), DegenerateFitError);
  // a curve that is nowhere near log-log linear is rejected by the r^2 gate
  auto wiggly = [](double g) {
    return OpResult{std::exp(std::sin(300.0 * g)) * 1e-3, Method::exact, 0.0};
  };
  CHECK_THROWS_AS(diversity_estimate(wiggly, 1e-3, 1e-2, 16), DegenerateFitError);
}
