#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "fas/rng.hpp"

namespace fas {

// MISO-FAS scenario: N fixed transmit antennas with MRT precoding, one FAS
// receiver switching among M correlated ports.
struct MisoConfig {
  int n_antennas = 1;  // N
  int m_ports = 1;     // M
  double rho = 0.0;    // amplitude correlation factor, in [0, 1)
  double sigma2 = 1.0; // average per-branch channel power
  void validate() const;
};

// Dual-FAS scenario: FAS at both ends, best transmit/receive port pair.
struct DualConfig {
  int m_t = 1;
  int m_r = 1;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double sigma2 = 1.0;
  void validate() const;
};

// SNR threshold on the normalized axis gamma_FAS / gamma_bar.
class Threshold {
 public:
  static Threshold linear(double value);
  static Threshold from_db(double db);
  double value() const { return value_; }

 private:
  explicit Threshold(double v) : value_(v) {}
  double value_;
};

struct McEstimate {
  std::uint64_t trials = 0;
  std::uint64_t outages = 0;
  double p_hat = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::uint64_t seed = 0;
  double ci_half_width() const { return 0.5 * (ci95_high - ci95_low); }
};

// 95% Wilson score interval.
void wilson_interval(std::uint64_t successes, std::uint64_t trials, double& low, double& high);

struct McOptions {
  // Trials per derived stream; part of the determinism contract together with
  // the seed. Thread count never affects results.
  std::uint64_t chunk_size = 1u << 16;
  int n_threads = 0;  // 0 = hardware concurrency
};

// One draw of the per-port precoding gains X_m = sum_n |h_mn|^2 under the
// common-component parameterization of the equally correlated model.
Eigen::VectorXd sample_miso_gain(const MisoConfig& cfg, GaussianSource& draw);

// One draw of the M_R x M_T power gains |h_ij|^2 under the four-case
// common-component parameterization. Draw order: (1,1), then column 1 rows
// 2..M_R, then row 1 columns 2..M_T, then the remaining block row-major.
Eigen::MatrixXd sample_dual_gain(const DualConfig& cfg, GaussianSource& draw);

McEstimate estimate_op_miso(const MisoConfig& cfg, Threshold th, std::uint64_t trials,
                            std::uint64_t seed, const McOptions& opts = {});
McEstimate estimate_op_dual(const DualConfig& cfg, Threshold th, std::uint64_t trials,
                            std::uint64_t seed, const McOptions& opts = {});

// Rx-SISO-FAS: single fixed transmit antenna, m_r receive ports whose
// common-component coefficients follow the Jakes profile over w wavelengths.
McEstimate estimate_op_rx_siso(int m_r, double w, Threshold th, std::uint64_t trials,
                               std::uint64_t seed, const McOptions& opts = {});

}  // namespace fas
