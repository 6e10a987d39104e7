#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "volflow/forms.hpp"
#include "volflow/generator.hpp"
#include "volflow/linear_system.hpp"

namespace volflow {

// Sign in the closed-form drift solution p(t) = p0 + sigma * (a q0) t.
// Integrating pdot_i = dQ_ij/dp_j = -a_ij q^j with H = 0 gives sigma = -1;
// the drift tests check this value against direct RK4 integration.
inline constexpr double kDriftSign = -1.0;

struct SystemExpectations {
  bool volume_preserving = true;
  bool conserves_energy = false;
  bool symplectic = false;
};

struct SystemInstance {
  std::string name;
  GeneratedField field;
  std::optional<TwoFormField> alpha;
  std::optional<ScalarField> hamiltonian;
  std::function<PhaseState(double, const PhaseState&)> analytic;
  PhaseState default_x0;
  SystemExpectations expected;
};

// qdot = p, pdot = -s q - a q for the spec built from k.
SystemInstance linear_system(const Eigen::MatrixXd& k);

// Two masses m1, m2 on a spring of stiffness k:
//   k11 = -k/m1, k12 = k/m1, k21 = k/m2, k22 = -k/m2.
Eigen::MatrixXd coupled_oscillator_coefficients(double m1 = 1.0, double m2 = 2.0, double k = 1.0);
SystemInstance coupled_oscillators(double m1 = 1.0, double m2 = 2.0, double k = 1.0);

// H = sum (p_i^2 + w_i^2 q_i^2) / 2
SystemInstance harmonic_oscillator(int n, const std::vector<double>& frequencies);

// H = 0 linear system with antisymmetric a; q stays at q0.
SystemInstance drift_system(const Eigen::MatrixXd& a, const std::vector<double>& q0,
                            const std::vector<double>& p0 = {});

SystemInstance zero_system(int n);

struct RandomAlphaOptions {
  int max_degree = 3;
  int terms_per_component = 3;
  double amplitude = 1.0;
  // Forces A^i_i to sum to zero, i.e. tr alpha = 0 pointwise.
  bool traceless = false;
};

// Seeded random polynomial 2-form field as a system.
SystemInstance random_alpha_system(int n, std::uint64_t seed, const RandomAlphaOptions& options = {});

}  // namespace volflow
