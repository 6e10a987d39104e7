#include "volflow/systems.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "volflow/random_fields.hpp"

namespace volflow {

namespace {

// Linear field xdot = M x in (q, p) coordinates.
GeneratedField linear_field(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows() / 2);
  return GeneratedField(n, FieldKind::Direct, [m](const PhaseState& x) { return FiberVector(m * x.coords()); });
}

// M for qdot = p, pdot = -k q.
Eigen::MatrixXd second_order_matrix(const Eigen::MatrixXd& k) {
  const auto n = k.rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  m.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  m.bottomLeftCorner(n, n) = -k;
  return m;
}

}  // namespace

SystemInstance linear_system(const Eigen::MatrixXd& k) {
  const LinearSystemSpec spec = LinearSystemSpec::from_coefficients(k);
  const int n = spec.n;
  const Eigen::MatrixXd m = second_order_matrix(spec.s + spec.a);
  const bool antisym_zero = spec.a.cwiseAbs().maxCoeff() == 0.0;

  SystemInstance sys{.name = "linear",
                     .field = linear_field(m),
                     .alpha = std::nullopt,
                     .hamiltonian = ScalarField::from_polynomial(spec.hamiltonian()),
                     .analytic = [m](double t, const PhaseState& x0) {
                       return PhaseState(Eigen::MatrixXd((t * m).exp()) * x0.coords());
                     },
                     .default_x0 = PhaseState(Eigen::VectorXd::Unit(2 * n, 0)),
                     .expected = {.volume_preserving = true,
                                  .conserves_energy = antisym_zero,
                                  .symplectic = antisym_zero}};
  if (n >= 2) {
    sys.alpha = linear_system_two_form(spec);
    sys.field.with_source(*sys.alpha);
  }
  return sys;
}

Eigen::MatrixXd coupled_oscillator_coefficients(double m1, double m2, double k) {
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw std::invalid_argument("coupled_oscillators: masses must be positive");
  Eigen::MatrixXd c(2, 2);
  c << -k / m1, k / m1, k / m2, -k / m2;
  return c;
}

SystemInstance coupled_oscillators(double m1, double m2, double k) {
  SystemInstance sys = linear_system(coupled_oscillator_coefficients(m1, m2, k));
  sys.name = "coupled-oscillators";
  return sys;
}

SystemInstance harmonic_oscillator(int n, const std::vector<double>& frequencies) {
  if (n < 1) throw std::invalid_argument("harmonic_oscillator: n must be >= 1");
  std::vector<double> w = frequencies;
  if (w.empty()) w.assign(static_cast<std::size_t>(n), 1.0);
  if (static_cast<int>(w.size()) != n) throw std::invalid_argument("harmonic_oscillator: need one frequency per degree of freedom");

  Polynomial h(2 * n);
  for (int i = 0; i < n; ++i) {
    const Polynomial q = Polynomial::variable(2 * n, i);
    const Polynomial p = Polynomial::variable(2 * n, n + i);
    h += 0.5 * (p * p) + (0.5 * w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)]) * (q * q);
  }
  const ScalarField H = ScalarField::from_polynomial(h);

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2 * n);
  x0[0] = 1.0;
  SystemInstance sys{.name = "harmonic",
                     .field = hamiltonian_field(H, n),
                     .alpha = std::nullopt,
                     .hamiltonian = H,
                     .analytic = [w, n](double t, const PhaseState& s) {
                       Eigen::VectorXd x(2 * n);
                       for (int i = 0; i < n; ++i) {
                         const double wi = w[static_cast<std::size_t>(i)];
                         const double c = std::cos(wi * t), sn = std::sin(wi * t);
                         x[i] = s.q(i) * c + (wi != 0.0 ? s.p(i) * sn / wi : s.p(i) * t);
                         x[n + i] = -s.q(i) * wi * sn + s.p(i) * c;
                       }
                       return PhaseState(x);
                     },
                     .default_x0 = PhaseState(x0),
                     .expected = {.volume_preserving = true, .conserves_energy = true, .symplectic = true}};
  if (n >= 2) sys.alpha = hamiltonian_two_form(H, n);
  return sys;
}

SystemInstance drift_system(const Eigen::MatrixXd& a, const std::vector<double>& q0, const std::vector<double>& p0) {
  if (a.rows() == 0 || a.rows() != a.cols()) throw std::invalid_argument("drift_system: a must be square");
  if ((a + a.transpose()).cwiseAbs().maxCoeff() != 0.0) throw std::invalid_argument("drift_system: a must be antisymmetric");
  const int n = static_cast<int>(a.rows());
  if (static_cast<int>(q0.size()) != n) throw std::invalid_argument("drift_system: q0 has wrong length");
  std::vector<double> p = p0;
  if (p.empty()) p.assign(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(p.size()) != n) throw std::invalid_argument("drift_system: p0 has wrong length");

  SystemInstance sys{.name = "drift",
                     .field = GeneratedField::zero(n),
                     .alpha = std::nullopt,
                     .hamiltonian = std::nullopt,
                     .analytic = [a, n](double t, const PhaseState& s) {
                       Eigen::VectorXd x = s.coords();
                       const Eigen::VectorXd q = s.coords().head(n);
                       x.tail(n) += kDriftSign * (a * q) * t;
                       return PhaseState(x);
                     },
                     .default_x0 = PhaseState(q0, p),
                     .expected = {.volume_preserving = true, .conserves_energy = false, .symplectic = false}};
  sys.expected.symplectic = a.cwiseAbs().maxCoeff() == 0.0;
  if (n >= 2) {
    // H = 0 in the linear-system 2-form: only Q_ij = -a_ij p_k q^k survives.
    Polynomial pq(2 * n);
    for (int k = 0; k < n; ++k) pq += Polynomial::variable(2 * n, k) * Polynomial::variable(2 * n, n + k);
    TwoFormField alpha(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) alpha.set_Q(i, j, ScalarField::from_polynomial(-a(i, j) * pq));
    sys.field = generate(alpha);
    sys.alpha = alpha;
  }
  return sys;
}

SystemInstance zero_system(int n) {
  SystemInstance sys{.name = "zero",
                     .field = GeneratedField::zero(n),
                     .alpha = std::nullopt,
                     .hamiltonian = ScalarField(),
                     .analytic = [](double, const PhaseState& s) { return s; },
                     .default_x0 = PhaseState(Eigen::VectorXd::Zero(2 * n)),
                     .expected = {.volume_preserving = true, .conserves_energy = true, .symplectic = true}};
  if (n >= 2) {
    sys.alpha = TwoFormField(n);
    sys.field = generate(*sys.alpha);
  }
  return sys;
}

SystemInstance random_alpha_system(int n, std::uint64_t seed, const RandomAlphaOptions& options) {
  Rng rng(seed);
  TwoFormField alpha = random_two_form(n, rng, options);
  SystemInstance sys{.name = "random-alpha",
                     .field = generate(alpha),
                     .alpha = alpha,
                     .hamiltonian = std::nullopt,
                     .analytic = {},
                     .default_x0 = random_point(n, rng, 0.5),
                     .expected = {.volume_preserving = true, .conserves_energy = false, .symplectic = false}};
  return sys;
}

// ---------------------------------------------------------------------------
// Random fields
// ---------------------------------------------------------------------------

Polynomial random_polynomial(int vars, int max_degree, int terms, Rng& rng, double amplitude) {
  std::uniform_int_distribution<int> degree(0, max_degree);
  std::uniform_int_distribution<int> var(0, vars - 1);
  std::uniform_real_distribution<double> coeff(-amplitude, amplitude);
  Polynomial p(vars);
  for (int t = 0; t < terms; ++t) {
    Polynomial::Powers powers(static_cast<std::size_t>(vars), 0);
    const int deg = degree(rng);
    for (int k = 0; k < deg; ++k) ++powers[static_cast<std::size_t>(var(rng))];
    p.add_term(coeff(rng), powers);
  }
  return p;
}

TwoFormField random_two_form(int n, Rng& rng, const RandomAlphaOptions& options) {
  TwoFormField alpha(n);
  auto draw = [&] {
    return ScalarField::from_polynomial(
        random_polynomial(2 * n, options.max_degree, options.terms_per_component, rng, options.amplitude));
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      alpha.set_A(i, j, draw());
      if (i < j) {
        alpha.set_Q(i, j, draw());
        alpha.set_P(i, j, draw());
      }
    }
  }
  if (options.traceless) {
    ScalarField rest;
    for (int i = 0; i + 1 < n; ++i) rest = rest + alpha.A(i, i);
    alpha.set_A(n - 1, n - 1, -rest);
  }
  return alpha;
}

OneFormField random_one_form(int n, Rng& rng, int max_degree, int terms) {
  OneFormField beta(n);
  for (int i = 0; i < n; ++i) {
    beta.b[static_cast<std::size_t>(i)] = ScalarField::from_polynomial(random_polynomial(2 * n, max_degree, terms, rng));
    beta.c[static_cast<std::size_t>(i)] = ScalarField::from_polynomial(random_polynomial(2 * n, max_degree, terms, rng));
  }
  return beta;
}

ScalarField random_scalar_field(int n, Rng& rng, int max_degree, int terms) {
  return ScalarField::from_polynomial(random_polynomial(2 * n, max_degree, terms, rng));
}

PhaseState random_point(int n, Rng& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Eigen::VectorXd x(2 * n);
  for (int i = 0; i < 2 * n; ++i) x[i] = u(rng);
  return PhaseState(x);
}

}  // namespace volflow
