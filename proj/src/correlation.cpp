#include "fas/correlation.hpp"

#include <cmath>
#include <stdexcept>

#include "fas/special_functions.hpp"

namespace fas {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxDim = 1000;  // 10^6 dense entries

void check_rho(double rho, const char* what) {
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::domain_error(std::string(what) + ": correlation factor must lie in [0, 1)");
}

CorrelationMatrix finalize(Eigen::MatrixXd m) {
  CorrelationMatrix out{std::move(m)};
  if (!is_positive_semidefinite(out.entries))
    throw std::runtime_error("correlation matrix failed the PSD check");
  return out;
}

Eigen::MatrixXd constant_offdiag(int size, double value) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(size, size, value);
  m.diagonal().setOnes();
  return m;
}

}  // namespace

void EquiCorrelation::validate() const {
  if (size < 1) throw std::domain_error("EquiCorrelation: size must be >= 1");
  check_rho(rho, "EquiCorrelation");
}

void KroneckerCorrelation::validate() const {
  if (m_r < 1 || m_t < 1)
    throw std::domain_error("KroneckerCorrelation: port counts must be >= 1");
  check_rho(rho1, "KroneckerCorrelation rho1");
  check_rho(rho2, "KroneckerCorrelation rho2");
  if (long(m_r) * long(m_t) > kMaxDim)
    throw std::invalid_argument("KroneckerCorrelation: matrix dimension exceeds the desk-scale guard");
}

bool is_positive_semidefinite(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.info() == Eigen::Success && solver.eigenvalues().minCoeff() >= -tol;
}

CorrelationMatrix build_equicorrelated(int size, double rho) {
  EquiCorrelation cfg{size, rho};
  cfg.validate();
  if (size > kMaxDim)
    throw std::invalid_argument("build_equicorrelated: matrix dimension exceeds the desk-scale guard");
  return finalize(constant_offdiag(size, rho * rho));
}

CorrelationMatrix equicorrelated_amplitude(int size, double rho) {
  if (size < 1) throw std::domain_error("equicorrelated_amplitude: size must be >= 1");
  check_rho(rho, "equicorrelated_amplitude");
  if (size > kMaxDim)
    throw std::invalid_argument("equicorrelated_amplitude: matrix dimension exceeds the desk-scale guard");
  return finalize(constant_offdiag(size, rho));
}

CorrelationMatrix build_kronecker(const KroneckerCorrelation& cfg) {
  cfg.validate();
  const int dim = cfg.m_r * cfg.m_t;
  Eigen::MatrixXd m(dim, dim);
  for (int j1 = 0; j1 < cfg.m_t; ++j1)
    for (int i1 = 0; i1 < cfg.m_r; ++i1)
      for (int j2 = 0; j2 < cfg.m_t; ++j2)
        for (int i2 = 0; i2 < cfg.m_r; ++i2) {
          double v;
          if (i1 == i2 && j1 == j2)
            v = 1.0;
          else if (i1 == i2)
            v = cfg.rho2;
          else if (j1 == j2)
            v = cfg.rho1;
          else
            v = cfg.rho1 * cfg.rho2;
          m(j1 * cfg.m_r + i1, j2 * cfg.m_r + i2) = v;
        }
  return finalize(std::move(m));
}

Eigen::VectorXd jakes_coefficients(int m_r, double w) {
  if (m_r < 2) throw std::domain_error("jakes_coefficients: m_r must be >= 2");
  if (!(w > 0.0) || !std::isfinite(w))
    throw std::domain_error("jakes_coefficients: aperture w must be finite and > 0");
  Eigen::VectorXd rho(m_r);
  rho[0] = 1.0;
  for (int i = 1; i < m_r; ++i)
    rho[i] = bessel_j0(2.0 * kPi * double(i) * w / double(m_r - 1));
  return rho;
}

}  // namespace fas
