#pragma once

#include <Eigen/Dense>

#include "volflow/polynomial.hpp"

namespace volflow {

// Linear system q''^i = -k_ij q^j, split into symmetric and antisymmetric
// parts s = (k + k^T)/2, a = (k - k^T)/2.
struct LinearSystemSpec {
  int n = 0;
  Eigen::MatrixXd k;
  Eigen::MatrixXd s;
  Eigen::MatrixXd a;

  // Throws std::invalid_argument for a non-square or empty matrix.
  static LinearSystemSpec from_coefficients(const Eigen::MatrixXd& k);

  // H = 1/2 delta^{ij} p_i p_j + 1/2 s_ij q^i q^j
  Polynomial hamiltonian() const;
};

}  // namespace volflow
