#pragma once

#include <stdexcept>

namespace fas {

// Tolerance knobs shared by the series kernels and the adaptive quadrature.
struct Accuracy {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_terms = 10000;

  void validate() const {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("Accuracy: abs_tol must be > 0");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("Accuracy: rel_tol must be > 0");
    if (max_terms < 1) throw std::invalid_argument("Accuracy: max_terms must be >= 1");
  }
};

}  // namespace fas
