#pragma once

#include <Eigen/Dense>

namespace fas {

// Equally correlated family of the multi-antenna receive side: unit diagonal,
// every off-diagonal equal to rho^2 (power-correlation convention).
struct EquiCorrelation {
  int size = 1;
  double rho = 0.0;
  void validate() const;
};

// Kronecker family parameters: rho1 on the receive side, rho2 on the
// transmit side.
struct KroneckerCorrelation {
  int m_r = 1;
  int m_t = 1;
  double rho1 = 0.0;
  double rho2 = 0.0;
  void validate() const;
};

// Dense symmetric correlation matrix, unit diagonal, PSD-verified at build.
struct CorrelationMatrix {
  Eigen::MatrixXd entries;
  int dim() const { return int(entries.rows()); }
};

// Smallest eigenvalue >= -tol via a self-adjoint eigensolver.
bool is_positive_semidefinite(const Eigen::MatrixXd& m, double tol = 1e-10);

CorrelationMatrix build_equicorrelated(int size, double rho);

// Unit diagonal with constant off-diagonal rho itself (amplitude convention);
// these are the factor matrices of the Kronecker family.
CorrelationMatrix equicorrelated_amplitude(int size, double rho);

// Port-pair correlation of the dual model. Ports are ordered p = j*m_r + i
// (receive index fastest); the entry between sub-channels (i1,j1) and (i2,j2)
// follows the four-case rule {1, rho1, rho2, rho1*rho2}.
CorrelationMatrix build_kronecker(const KroneckerCorrelation& cfg);

// Jakes spatial profile across m_r ports spread over w wavelengths:
// rho_i = J0(2*pi*(i-1)*w / (m_r-1)), i = 1..m_r. Coefficients may be
// negative; downstream formulas consume rho_i^2.
Eigen::VectorXd jakes_coefficients(int m_r, double w);

}  // namespace fas
