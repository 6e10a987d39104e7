#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "volflow/exterior.hpp"
#include "volflow/forms.hpp"
#include "volflow/generator.hpp"

namespace volflow {

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  double step = 0.0;
  bool failed = false;
  std::size_t last_valid = 0;  // index of the last finite state
  std::string failure;
};

// Classical fixed-step RK4. A non-finite state (or a field evaluation error)
// stops the integration and flags the trajectory.
Trajectory integrate(const GeneratedField& field, const PhaseState& x0, double dt, int steps);

// Single RK4 step on flat coordinates.
Eigen::VectorXd rk4_step(const GeneratedField& field, const Eigen::VectorXd& x, double dt);

// State after `steps` RK4 steps; throws EvaluationError on blow-up.
PhaseState flow_map(const GeneratedField& field, const PhaseState& x0, double dt, int steps);

// Central-difference Jacobian of the time-(dt*steps) flow map, displacement h
// per coordinate.
inline constexpr double kFlowJacobianStep = 1e-5;
Eigen::MatrixXd flow_jacobian(const GeneratedField& field, const PhaseState& x0, double dt, int steps,
                              double h = kFlowJacobianStep);
double flow_jacobian_det(const GeneratedField& field, const PhaseState& x0, double dt, int steps,
                         double h = kFlowJacobianStep);

// Central-difference Jacobian dX^a/dx^m of the field at x.
Eigen::MatrixXd field_jacobian(const GeneratedField& field, const PhaseState& x);

// Exact derivative of rk4_step with respect to x, built from field Jacobians
// at the four stages.
Eigen::MatrixXd rk4_step_jacobian(const GeneratedField& field, const Eigen::VectorXd& x, double dt);

// det of the Jacobian of the time-(dt*steps) RK4 flow map, as the product of
// the per-step determinants. Unlike flow_jacobian_det this stays accurate
// when the flow stretches phase space strongly. Throws EvaluationError on
// blow-up.
double flow_volume_det(const GeneratedField& field, const PhaseState& x0, double dt, int steps);

// Sum of central-difference partials dX^a/dx^a.
double divergence_at(const GeneratedField& field, const PhaseState& x);

// L_X omega = d(i_X omega), from the finite-difference Jacobian of X.
KForm lie_derivative_omega(const GeneratedField& field, const PhaseState& x);

// {f, g} = df/dq^i dg/dp_i - df/dp_i dg/dq^i
double poisson_bracket(const ScalarField& f, const ScalarField& g, const PhaseState& x);

// df as a constant 1-form at x.
KForm differential_at(const ScalarField& f, const PhaseState& x);

struct DotfCheck {
  double lhs = 0.0;  // df(X)
  double rhs = 0.0;  // coefficient of omega^n in n(n-1) d alpha ^ df ^ omega^{n-2}
  double residual = 0.0;
};
DotfCheck dotf_terms(const TwoFormField& alpha, const ScalarField& f, const PhaseState& x);
double check_dotf(const TwoFormField& alpha, const ScalarField& f, const PhaseState& x);

struct Observable {
  std::string name;
  ScalarField f;
};

struct MonitorOptions {
  int sample_every = 100;
  bool track_volume = true;
};

struct FlowDiagnostics {
  std::vector<double> sample_times;
  std::vector<double> volume_dets;
  std::vector<double> divergence_samples;
  // |L_X omega| (max coefficient) at each sample point.
  std::vector<double> symplecticity_samples;
  std::map<std::string, std::vector<double>> observables;
  std::map<std::string, std::vector<double>> identity_residuals;
  Trajectory trajectory;

  double max_volume_error() const;
  double max_abs_divergence() const;
  double max_symplecticity() const;
  double observable_drift(const std::string& name) const;
};

FlowDiagnostics monitor(const GeneratedField& field, const PhaseState& x0, double dt, int steps,
                        const std::vector<Observable>& observables, const MonitorOptions& options = {});

}  // namespace volflow
