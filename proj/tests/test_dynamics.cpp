#include <numbers>

#include "doctest.h"
#include "property.hpp"
#include "volflow/dynamics.hpp"
#include "volflow/random_fields.hpp"
#include "volflow/systems.hpp"

using namespace volflow;

namespace {

ScalarField poly(const char* text, int n) { return ScalarField::from_polynomial(parse_polynomial(text, n)); }

PhaseState point(std::initializer_list<double> c) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(c.size()));
  int i = 0;
  for (double x : c) v[i++] = x;
  return PhaseState(v);
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TEST_CASE("zero field trajectory is constant and uniformly timed") {
  const PhaseState x0 = point({1, 2, 3, 4});
  const Trajectory tr = integrate(GeneratedField::zero(2), x0, 0.1, 50);
  REQUIRE(tr.states.size() == 51);
  CHECK_FALSE(tr.failed);
  CHECK(tr.last_valid == 50);
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    CHECK(tr.states[k].coords() == x0.coords());
    CHECK(std::abs(tr.times[k] - 0.1 * static_cast<double>(k)) <= 1e-12);
  }
  CHECK_THROWS_AS(integrate(GeneratedField::zero(2), x0, 0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(integrate(GeneratedField::zero(2), x0, 0.1, 0), std::invalid_argument);
}

TEST_CASE("blow-up truncates the trajectory") {
  // qdot = q^2 from q = 1 leaves every bound at t = 1
  const GeneratedField f(1, FieldKind::Direct, [](const PhaseState& x) {
    FiberVector v = FiberVector::zero(1);
    v.q(0) = x.q(0) * x.q(0);
    return v;
  });
  const Trajectory tr = integrate(f, point({1, 0}), 0.01, 1000);
  CHECK(tr.failed);
  CHECK(tr.last_valid + 1 == tr.states.size());
  CHECK(tr.states.back().finite());
  CHECK(tr.times.back() < 1.1);
  CHECK_THROWS_AS(flow_map(f, point({1, 0}), 0.01, 1000), EvaluationError);

  const GeneratedField nan_field(1, FieldKind::Direct, [](const PhaseState& x) -> FiberVector {
    if (x.q(0) > 0.5) throw EvaluationError("X", "outside domain");
    FiberVector v = FiberVector::zero(1);
    v.q(0) = 1.0;
    return v;
  });
  const Trajectory t2 = integrate(nan_field, point({0, 0}), 0.1, 20);
  CHECK(t2.failed);
  CHECK(t2.failure.find("outside domain") != std::string::npos);
}

TEST_CASE("harmonic oscillator returns after one period") {
  const SystemInstance h = harmonic_oscillator(1, {1.0});
  const int steps = 6283;
  const PhaseState x = flow_map(h.field, point({1, 0}), kTwoPi / steps, steps);
  CHECK(proptest::max_abs_diff(x.coords(), point({1, 0}).coords()) <= 1e-10);
  // and tracks (cos t, -sin t) on the way
  const Trajectory tr = integrate(h.field, point({1, 0}), 1e-3, 2000);
  for (std::size_t k = 0; k < tr.states.size(); k += 250) {
    CHECK(tr.states[k].q(0) == doctest::Approx(std::cos(tr.times[k])).epsilon(1e-11));
    CHECK(tr.states[k].p(0) == doctest::Approx(-std::sin(tr.times[k])).epsilon(1e-11));
  }
}

TEST_CASE("flow jacobian determinants") {
  CHECK(flow_jacobian_det(GeneratedField::zero(2), point({1, 2, 3, 4}), 0.1, 10) == 1.0);
  CHECK(flow_volume_det(GeneratedField::zero(2), point({1, 2, 3, 4}), 0.1, 10) == 1.0);
  const SystemInstance h = harmonic_oscillator(1, {1.0});
  CHECK(std::abs(flow_jacobian_det(h.field, point({1, 0}), kTwoPi / 6283, 6283) - 1.0) <= 1e-8);
  CHECK(std::abs(flow_volume_det(coupled_oscillators().field, point({1, 0, 0, 0}), 1e-3, 10000) - 1.0) <= 1e-6);
}

TEST_CASE("step-product determinant agrees with finite differences where the latter is well conditioned") {
  proptest::for_all(4, 31, [](auto& rng, int t) {
    const SystemInstance s = random_alpha_system(2, 1 + static_cast<std::uint64_t>(t));
    const PhaseState x0 = s.default_x0;
    const double fd = flow_jacobian_det(s.field, x0, 1e-2, 100);
    const double prod = flow_volume_det(s.field, x0, 1e-2, 100);
    CHECK(std::abs(fd - prod) <= 1e-7);
  });
  const SystemInstance co = coupled_oscillators();
  CHECK(std::abs(flow_jacobian_det(co.field, co.default_x0, 1e-3, 1000) -
                 flow_volume_det(co.field, co.default_x0, 1e-3, 1000)) <= 1e-8);
}

TEST_CASE("rk4 step jacobian matches differences of rk4_step") {
  Rng r(9);
  const SystemInstance s = random_alpha_system(2, 3);
  const Eigen::VectorXd x = random_point(2, r, 0.5).coords();
  const Eigen::MatrixXd j = rk4_step_jacobian(s.field, x, 0.05);
  for (int m = 0; m < 4; ++m) {
    Eigen::VectorXd a = x, b = x;
    a[m] += 1e-6;
    b[m] -= 1e-6;
    const Eigen::VectorXd col = (rk4_step(s.field, a, 0.05) - rk4_step(s.field, b, 0.05)) / 2e-6;
    CHECK(proptest::max_abs_diff(col, j.col(m)) <= 1e-7);
  }
}

TEST_CASE("divergence") {
  CHECK(divergence_at(GeneratedField::zero(2), point({1, 2, 3, 4})) == 0.0);
  proptest::for_all(100, 32, [](auto& rng, int t) {
    const int n = 2 + t % 2;
    Rng r(rng());
    CHECK(std::abs(divergence_at(generate(random_two_form(n, r)), random_point(n, r))) <= 1e-5);
  });
  const SystemInstance co = coupled_oscillators();
  CHECK(std::abs(divergence_at(co.field, point({0.3, 1.2, -0.5, 2.0}))) <= 1e-12);
}

TEST_CASE("Lie derivative of omega for the coupled oscillators is a_ij dq^i^dq^j") {
  const SystemInstance co = coupled_oscillators();
  proptest::for_all(10, 33, [&](auto& rng, int) {
    const PhaseState x(proptest::uniform_vector(rng, 4, 2.0));
    const KForm l = lie_derivative_omega(co.field, x);
    // a_ij dq^i^dq^j = 2 a_12 dq1^dq2 with a_12 = 1/4
    CHECK((l - KForm::monomial(4, {0, 1}, 0.5)).max_abs() <= 1e-6);
  });
  const SystemInstance h = harmonic_oscillator(2, {1.0, 2.0});
  CHECK(lie_derivative_omega(h.field, point({0.1, 0.2, 0.3, 0.4})).max_abs() <= 1e-6);
  const Eigen::Matrix2d sym = (Eigen::Matrix2d() << 2.0, 0.5, 0.5, 1.0).finished();
  CHECK(lie_derivative_omega(linear_system(sym).field, point({1, -1, 2, 0.5})).max_abs() <= 1e-6);
}

TEST_CASE("poisson bracket") {
  const PhaseState x = point({0.2, -0.3, 0.4, 0.9});
  CHECK(poisson_bracket(poly("q1", 2), poly("p1", 2), x) == doctest::Approx(1.0));
  CHECK(poisson_bracket(poly("q1", 2), poly("p2", 2), x) == doctest::Approx(0.0));
  proptest::for_all(100, 34, [](auto& rng, int t) {
    const int n = 1 + t % 3;
    Rng r(rng());
    const ScalarField f = random_scalar_field(n, r);
    const ScalarField H = random_scalar_field(n, r);
    const PhaseState y = random_point(n, r);
    CHECK(std::abs(poisson_bracket(f, f, y)) <= 1e-15);
    const double tr = trace_of(wedge(differential_at(f, y), differential_at(H, y)), n);
    CHECK(std::abs(poisson_bracket(f, H, y) + tr) <= 1e-12);
  });
}

TEST_CASE("observable derivative identity") {
  Rng r0(35);
  const TwoFormField alpha = random_two_form(2, r0);
  CHECK(check_dotf(alpha, ScalarField::constant(3.0), point({1, 2, 3, 4})) == 0.0);

  proptest::for_all(100, 36, [](auto& rng, int t) {
    const int n = 2 + t % 2;
    Rng r(rng());
    const TwoFormField a = random_two_form(n, r);
    const ScalarField f = random_scalar_field(n, r);
    CHECK(check_dotf(a, f, random_point(n, r)) <= 1e-10);
  });

  // Hamiltonian alpha: fdot = tr(dH ^ df)
  proptest::for_all(20, 37, [](auto& rng, int t) {
    const int n = 2 + t % 2;
    Rng r(rng());
    const ScalarField H = random_scalar_field(n, r);
    const ScalarField f = random_scalar_field(n, r);
    const PhaseState x = random_point(n, r);
    const DotfCheck c = dotf_terms(hamiltonian_two_form(H, n), f, x);
    CHECK(c.residual <= 1e-10);
    CHECK(c.lhs == doctest::Approx(trace_of(wedge(differential_at(H, x), differential_at(f, x)), n)).epsilon(1e-10));
  });
}

TEST_CASE("monitor on the zero field") {
  const FlowDiagnostics d = monitor(GeneratedField::zero(2), point({1, 2, 3, 4}), 0.01, 100, {}, {10, true});
  CHECK(d.sample_times.size() == 11);
  CHECK(d.max_volume_error() == 0.0);
  CHECK(d.max_abs_divergence() == 0.0);
  for (double det : d.volume_dets) CHECK(det == 1.0);
}

TEST_CASE("monitor: harmonic energy conserved, coupled oscillators not hamiltonian but volume preserving") {
  const SystemInstance h = harmonic_oscillator(1, {1.0});
  const FlowDiagnostics dh = monitor(h.field, h.default_x0, 1e-3, 10000, {{"H", *h.hamiltonian}});
  CHECK(dh.observable_drift("H") <= 1e-9);
  CHECK(dh.max_volume_error() <= 1e-6);

  const SystemInstance co = coupled_oscillators();
  const LinearSystemSpec spec = LinearSystemSpec::from_coefficients(coupled_oscillator_coefficients());
  const ScalarField H = ScalarField::from_polynomial(spec.hamiltonian());
  const FlowDiagnostics dc = monitor(co.field, co.default_x0, 1e-3, 10000, {{"H", H}});
  CHECK(dc.observable_drift("H") > 1e-3);
  CHECK(dc.max_volume_error() <= 1e-6);
  CHECK(dc.max_symplecticity() == doctest::Approx(0.5).epsilon(1e-6));
  for (double det : dc.volume_dets) CHECK(det > 0.0);
  // identity residuals along the orbit; both sides of the identity scale like |x|^2
  REQUIRE(dc.identity_residuals.count("dotf:H") == 1);
  const auto& res = dc.identity_residuals.at("dotf:H");
  REQUIRE(res.size() == dc.sample_times.size());
  for (std::size_t i = 0; i < res.size(); ++i) {
    const double r2 = dc.trajectory.states[i * 100].coords().squaredNorm();
    CHECK(res[i] / (1.0 + r2) <= 1e-13);
  }
}
