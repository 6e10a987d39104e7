#include "volflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace volflow {

namespace {

void check_run(double dt, int steps) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("integrate: dt must be positive and finite");
  if (steps < 1) throw std::invalid_argument("integrate: steps must be >= 1");
}

Eigen::VectorXd eval(const GeneratedField& field, const Eigen::VectorXd& x) {
  return field(PhaseState(x)).components;
}

}  // namespace

Eigen::VectorXd rk4_step(const GeneratedField& field, const Eigen::VectorXd& x, double dt) {
  const Eigen::VectorXd k1 = eval(field, x);
  const Eigen::VectorXd k2 = eval(field, x + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = eval(field, x + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = eval(field, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate(const GeneratedField& field, const PhaseState& x0, double dt, int steps) {
  check_run(dt, steps);
  if (x0.n() != field.n()) throw std::invalid_argument("integrate: initial state dimension mismatch");
  Trajectory traj;
  traj.step = dt;
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  if (!x0.finite()) {
    traj.failed = true;
    traj.failure = "non-finite initial state";
    return traj;
  }
  Eigen::VectorXd x = x0.coords();
  for (int k = 1; k <= steps; ++k) {
    try {
      x = rk4_step(field, x, dt);
    } catch (const EvaluationError& e) {
      traj.failed = true;
      traj.failure = e.what();
      return traj;
    }
    if (!x.allFinite()) {
      traj.failed = true;
      traj.failure = "non-finite state at step " + std::to_string(k);
      return traj;
    }
    // times are k * dt rather than accumulated sums so spacing stays exact
    traj.times.push_back(k * dt);
    traj.states.emplace_back(x);
    traj.last_valid = static_cast<std::size_t>(k);
  }
  return traj;
}

PhaseState flow_map(const GeneratedField& field, const PhaseState& x0, double dt, int steps) {
  check_run(dt, steps);
  Eigen::VectorXd x = x0.coords();
  for (int k = 0; k < steps; ++k) {
    x = rk4_step(field, x, dt);
    if (!x.allFinite()) throw EvaluationError("flow", "non-finite state at step " + std::to_string(k + 1));
  }
  return PhaseState(x);
}

Eigen::MatrixXd flow_jacobian(const GeneratedField& field, const PhaseState& x0, double dt, int steps, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("flow_jacobian: displacement must be positive");
  const int d = x0.dim();
  Eigen::MatrixXd j(d, d);
  for (int m = 0; m < d; ++m) {
    Eigen::VectorXd plus = x0.coords();
    Eigen::VectorXd minus = x0.coords();
    plus[m] += h;
    minus[m] -= h;
    const Eigen::VectorXd fp = flow_map(field, PhaseState(plus), dt, steps).coords();
    const Eigen::VectorXd fm = flow_map(field, PhaseState(minus), dt, steps).coords();
    // divide by the displacement actually represented, not 2h
    j.col(m) = (fp - fm) / (plus[m] - minus[m]);
  }
  return j;
}

double flow_jacobian_det(const GeneratedField& field, const PhaseState& x0, double dt, int steps, double h) {
  return flow_jacobian(field, x0, dt, steps, h).determinant();
}

Eigen::MatrixXd field_jacobian(const GeneratedField& field, const PhaseState& x) {
  const int d = x.dim();
  Eigen::MatrixXd j(d, d);
  Eigen::VectorXd y = x.coords();
  for (int m = 0; m < d; ++m) {
    const double h = fd_step(x.coords()[m]);
    const double hi = x.coords()[m] + h;
    const double lo = x.coords()[m] - h;
    y[m] = hi;
    const Eigen::VectorXd fp = field(PhaseState(y)).components;
    y[m] = lo;
    const Eigen::VectorXd fm = field(PhaseState(y)).components;
    y[m] = x.coords()[m];
    j.col(m) = (fp - fm) / (hi - lo);
  }
  return j;
}

Eigen::MatrixXd rk4_step_jacobian(const GeneratedField& field, const Eigen::VectorXd& x, double dt) {
  const int d = static_cast<int>(x.size());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  const Eigen::VectorXd k1 = eval(field, x);
  const Eigen::VectorXd x2 = x + 0.5 * dt * k1;
  const Eigen::VectorXd k2 = eval(field, x2);
  const Eigen::VectorXd x3 = x + 0.5 * dt * k2;
  const Eigen::VectorXd k3 = eval(field, x3);
  const Eigen::VectorXd x4 = x + dt * k3;
  // dk_s/dx by the chain rule through each stage point
  const Eigen::MatrixXd j1 = field_jacobian(field, PhaseState(x));
  const Eigen::MatrixXd j2 = field_jacobian(field, PhaseState(x2)) * (id + 0.5 * dt * j1);
  const Eigen::MatrixXd j3 = field_jacobian(field, PhaseState(x3)) * (id + 0.5 * dt * j2);
  const Eigen::MatrixXd j4 = field_jacobian(field, PhaseState(x4)) * (id + dt * j3);
  return id + (dt / 6.0) * (j1 + 2.0 * j2 + 2.0 * j3 + j4);
}

double flow_volume_det(const GeneratedField& field, const PhaseState& x0, double dt, int steps) {
  check_run(dt, steps);
  Eigen::VectorXd x = x0.coords();
  double det = 1.0;
  for (int k = 0; k < steps; ++k) {
    det *= rk4_step_jacobian(field, x, dt).determinant();
    x = rk4_step(field, x, dt);
    if (!x.allFinite() || !std::isfinite(det))
      throw EvaluationError("flow", "non-finite state at step " + std::to_string(k + 1));
  }
  return det;
}

double divergence_at(const GeneratedField& field, const PhaseState& x) {
  // Only the diagonal is needed, but each column costs the same two
  // evaluations either way.
  return field_jacobian(field, x).trace();
}

KForm lie_derivative_omega(const GeneratedField& field, const PhaseState& x) {
  const int n = x.n();
  const int d = 2 * n;
  const Eigen::MatrixXd j = field_jacobian(field, x);
  // theta = i_X omega = X^{p_i} dq^i - X^{q_i} dp_i; grad_theta(l, m) = d theta_l / d x^m
  Eigen::MatrixXd grad_theta(d, d);
  for (int i = 0; i < n; ++i) {
    grad_theta.row(q_index(n, i)) = j.row(p_index(n, i));
    grad_theta.row(p_index(n, i)) = -j.row(q_index(n, i));
  }
  KForm r(d, 2);
  for (int m = 0; m < d; ++m)
    for (int l = m + 1; l < d; ++l) r.add({m, l}, grad_theta(l, m) - grad_theta(m, l));
  return r;
}

double poisson_bracket(const ScalarField& f, const ScalarField& g, const PhaseState& x) {
  const int n = x.n();
  const Eigen::VectorXd df = f.gradient(x);
  const Eigen::VectorXd dg = g.gradient(x);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += df[i] * dg[n + i] - df[n + i] * dg[i];
  return s;
}

KForm differential_at(const ScalarField& f, const PhaseState& x) { return KForm::one_form(f.gradient(x)); }

DotfCheck dotf_terms(const TwoFormField& alpha, const ScalarField& f, const PhaseState& x) {
  const int n = alpha.n();
  DotfCheck c;
  const Eigen::VectorXd grad = f.gradient(x);
  c.lhs = grad.dot(generate(alpha)(x).components);
  const KForm top = wedge(wedge(d_at_point(jet_at(alpha, x)), differential_at(f, x)), omega_power(n, n - 2));
  c.rhs = n * (n - 1) * omega_n_ratio(top, n);
  c.residual = std::abs(c.lhs - c.rhs);
  return c;
}

double check_dotf(const TwoFormField& alpha, const ScalarField& f, const PhaseState& x) {
  return dotf_terms(alpha, f, x).residual;
}

// ---------------------------------------------------------------------------
// Monitoring
// ---------------------------------------------------------------------------

double FlowDiagnostics::max_volume_error() const {
  double m = 0.0;
  for (double d : volume_dets) m = std::max(m, std::abs(d - 1.0));
  return m;
}

double FlowDiagnostics::max_abs_divergence() const {
  double m = 0.0;
  for (double d : divergence_samples) m = std::max(m, std::abs(d));
  return m;
}

double FlowDiagnostics::max_symplecticity() const {
  double m = 0.0;
  for (double d : symplecticity_samples) m = std::max(m, d);
  return m;
}

double FlowDiagnostics::observable_drift(const std::string& name) const {
  auto it = observables.find(name);
  if (it == observables.end() || it->second.empty()) return 0.0;
  double m = 0.0;
  for (double v : it->second) m = std::max(m, std::abs(v - it->second.front()));
  return m;
}

FlowDiagnostics monitor(const GeneratedField& field, const PhaseState& x0, double dt, int steps,
                        const std::vector<Observable>& observables, const MonitorOptions& options) {
  check_run(dt, steps);
  if (options.sample_every < 1) throw std::invalid_argument("monitor: sample_every must be >= 1");
  FlowDiagnostics diag;
  diag.trajectory = integrate(field, x0, dt, steps);

  bool volume_ok = options.track_volume;
  double det = 1.0;

  const TwoFormField* alpha = field.source_two_form();
  const auto& states = diag.trajectory.states;
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (k > 0 && volume_ok) {
      try {
        det *= rk4_step_jacobian(field, states[k - 1].coords(), dt).determinant();
      } catch (const EvaluationError&) {
        volume_ok = false;
      }
    }
    if (k % static_cast<std::size_t>(options.sample_every) != 0) continue;

    const PhaseState& x = states[k];
    diag.sample_times.push_back(diag.trajectory.times[k]);
    diag.divergence_samples.push_back(divergence_at(field, x));
    diag.symplecticity_samples.push_back(lie_derivative_omega(field, x).max_abs());
    if (volume_ok) {
      if (std::isfinite(det)) diag.volume_dets.push_back(det);
      else volume_ok = false;
    }
    for (const auto& obs : observables) {
      diag.observables[obs.name].push_back(obs.f.value(x));
      if (alpha) diag.identity_residuals["dotf:" + obs.name].push_back(check_dotf(*alpha, obs.f, x));
    }
  }
  return diag;
}

}  // namespace volflow
