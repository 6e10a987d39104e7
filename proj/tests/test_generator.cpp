#include "doctest.h"
#include "property.hpp"
#include "volflow/dynamics.hpp"
#include "volflow/generator.hpp"
#include "volflow/random_fields.hpp"
#include "volflow/systems.hpp"
#include "volflow/verify.hpp"

using namespace volflow;

namespace {

ScalarField poly(const char* text, int n) { return ScalarField::from_polynomial(parse_polynomial(text, n)); }

Eigen::VectorXd vec(std::initializer_list<double> c) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(c.size()));
  int i = 0;
  for (double x : c) v[i++] = x;
  return v;
}

// alpha = q1 dp1^dq2
TwoFormField q1_dp1_dq2() {
  TwoFormField a(2);
  a.set_A(0, 1, poly("q1", 2));
  return a;
}

}  // namespace

TEST_CASE("zero alpha generates the zero field") {
  const PhaseState x(vec({0.1, 0.2, 0.3, 0.4}));
  CHECK(generate(TwoFormField(2))(x).components.isZero());
  CHECK(GeneratedField::zero(3)(PhaseState(Eigen::VectorXd::Ones(6))).components.isZero());
}

TEST_CASE("q1 dp1^dq2 generates d/dp2, by formula and by the exterior-algebra solve") {
  const TwoFormField a = q1_dp1_dq2();
  proptest::for_all(10, 21, [&](auto& rng, int) {
    const PhaseState x(proptest::uniform_vector(rng, 4, 3.0));
    CHECK(proptest::max_abs_diff(generate(a)(x).components, vec({0, 0, 0, 1})) == 0.0);
    CHECK(proptest::max_abs_diff(oracle_field(jet_at(a, x)).components, vec({0, 0, 0, 1})) <= 1e-12);
  });
}

TEST_CASE("the solve uses i_X(omega^n) = -n(n-1) d alpha ^ omega^{n-2}") {
  // d alpha = dq1^dp1^dq2; contracting omega^2 with d/dp2 must give -2 d alpha
  const KForm da = KForm::monomial(4, {0, 2, 1});
  const KForm lhs = contract(FiberVector::basis(2, 3), omega_power(2, 2));
  CHECK(lhs.approx_equal(da * -2.0));
}

TEST_CASE("hamiltonian alpha with H = p1 gives d/dq1") {
  const PhaseState x(vec({0.5, -0.5, 1.5, 2.0}));
  const TwoFormField a = hamiltonian_two_form(poly("p1", 2), 2);
  CHECK(proptest::max_abs_diff(generate(a)(x).components, vec({1, 0, 0, 0})) <= 1e-15);
  CHECK(proptest::max_abs_diff(oracle_field(jet_at(a, x)).components, vec({1, 0, 0, 0})) <= 1e-12);
}

TEST_CASE("hamiltonian field") {
  const PhaseState x(vec({0.3, -0.8}));
  CHECK(hamiltonian_field(ScalarField::constant(4.0), 1)(x).components.isZero());
  // harmonic oscillator: X = p d/dq - q d/dp
  const FiberVector X = hamiltonian_field(poly("0.5*(p1^2 + q1^2)", 1), 1)(x);
  CHECK(X.q(0) == doctest::Approx(-0.8));
  CHECK(X.p(0) == doctest::Approx(-0.3));
  CHECK(hamiltonian_field(ScalarField::constant(1.0), 1).kind() == FieldKind::Hamiltonian);
}

TEST_CASE("generate requires n >= 2 and checks dimensions") {
  CHECK_THROWS_AS(generate(TwoFormField(2))(PhaseState(Eigen::VectorXd::Zero(6))), std::invalid_argument);
}

TEST_CASE("hamiltonian reduction for random H") {
  proptest::for_all(20, 22, [](auto& rng, int t) {
    const int n = 2 + t % 2;
    Rng r(rng());
    const ScalarField H = random_scalar_field(n, r);
    const PhaseState x = random_point(n, r);
    CHECK(proptest::max_abs_diff(generate(hamiltonian_two_form(H, n))(x).components,
                                 hamiltonian_field(H, n)(x).components) <= 1e-12);
  });
}

TEST_CASE("evaluation is bit-for-bit deterministic") {
  Rng r(5);
  const GeneratedField X = generate(random_two_form(3, r));
  const PhaseState x = random_point(3, r);
  CHECK((X(x).components.array() == X(x).components.array()).all());
}

TEST_CASE("decomposition sums to the generated field") {
  proptest::for_all(30, 23, [](auto& rng, int t) {
    const int n = 2 + t % 3;
    Rng r(rng());
    const TwoFormField alpha = random_two_form(n, r);
    const auto [tr_part, extra] = decompose(alpha);
    const PhaseState x = random_point(n, r);
    CHECK(proptest::max_abs_diff(tr_part(x).components + extra(x).components, generate(alpha)(x).components) <= 1e-10);
    CHECK((tr_part + extra).kind() == FieldKind::Sum);
  });
}

TEST_CASE("decomposition with A = 0 has no trace part") {
  TwoFormField alpha(2);
  alpha.set_Q(0, 1, poly("p1*q2", 2));
  alpha.set_P(0, 1, poly("q1^2", 2));
  const auto [tr_part, extra] = decompose(alpha);
  const PhaseState x(vec({0.4, -1.1, 0.9, 0.2}));
  CHECK(tr_part(x).components.isZero());
  CHECK(proptest::max_abs_diff(extra(x).components, generate(alpha)(x).components) <= 1e-15);
}

TEST_CASE("decomposition of the coupled-oscillator alpha") {
  const SystemInstance sys = coupled_oscillators();
  const TwoFormField& alpha = *sys.alpha;
  const auto [tr_part, extra] = decompose(alpha);
  const LinearSystemSpec spec = LinearSystemSpec::from_coefficients(coupled_oscillator_coefficients());
  const ScalarField nH = ScalarField::from_polynomial(spec.hamiltonian() * 2.0);
  proptest::for_all(10, 24, [&](auto& rng, int) {
    const PhaseState x(proptest::uniform_vector(rng, 4));
    // first part is X_{n H/(n-1)} = X_{2H}
    CHECK(proptest::max_abs_diff(tr_part(x).components, hamiltonian_field(nH, 2)(x).components) <= 1e-12);
    // the sum reproduces qdot = p, pdot = -k q
    CHECK(proptest::max_abs_diff(tr_part(x).components + extra(x).components, sys.field(x).components) <= 1e-10);
  });
}

TEST_CASE("coupled-oscillator alpha: Q12 and its p-derivative at (1,0,0,0)") {
  const TwoFormField alpha = *coupled_oscillators().alpha;
  const PointwiseJet jet = jet_at(alpha, PhaseState(vec({1, 0, 0, 0})));
  CHECK(jet.Q(0, 1) == doctest::Approx(0.0));
  CHECK(jet.dQ_dp(0, 1, 0) == doctest::Approx(-0.25));
}

TEST_CASE("feng-shang tensor blocks") {
  const PhaseState x(vec({0.7, -0.2, 0.1, 0.5}));
  CHECK(feng_shang_from_alpha(TwoFormField(2)).a(x).isZero());
  const FengShangTensor t = feng_shang_from_alpha(q1_dp1_dq2());
  const Eigen::MatrixXd a = t.a(x);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(0, 3) = -0.7;
  expected(3, 0) = 0.7;
  CHECK((a - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK(proptest::max_abs_diff(feng_shang_field(t)(x).components, vec({0, 0, 0, 1})) == 0.0);
  CHECK(feng_shang_field(t).kind() == FieldKind::FengShang);

  // coupled oscillators: lower-right block is Q_ij = -a_ij p.q
  const Eigen::MatrixXd c = feng_shang_from_alpha(*coupled_oscillators().alpha).a(x);
  const double pq = 0.7 * 0.1 + -0.2 * 0.5;
  CHECK(c(2, 3) == doctest::Approx(-0.25 * pq));
  CHECK(c(3, 2) == doctest::Approx(0.25 * pq));
}

TEST_CASE("feng-shang field is divergence free and agrees exactly when tr alpha = 0") {
  RandomAlphaOptions traceless;
  traceless.traceless = true;
  proptest::for_all(20, 25, [&](auto& rng, int t) {
    const int n = 2 + t % 2;
    Rng r(rng());
    const TwoFormField alpha = random_two_form(n, r, traceless);
    const GeneratedField fs = feng_shang_field(feng_shang_from_alpha(alpha));
    const PhaseState x = random_point(n, r);
    CHECK(std::abs(trace(alpha, x)) <= 1e-12);
    CHECK(proptest::max_abs_diff(fs(x).components, generate(alpha)(x).components) <= 1e-10);
    CHECK(std::abs(divergence_at(fs, x)) <= 1e-5);
  });
}

TEST_CASE("feng-shang differs from generate by the trace terms when tr alpha != 0") {
  const int n = 2;
  const ScalarField H = poly("q1*p2 + p1^2", n);
  const TwoFormField alpha = hamiltonian_two_form(H, n);
  const PhaseState x(vec({0.5, -1.0, 0.25, 2.0}));
  const Eigen::VectorXd gap =
      feng_shang_field(feng_shang_from_alpha(alpha))(x).components - generate(alpha)(x).components;
  CHECK(gap.cwiseAbs().maxCoeff() >= 1e-3);
  // The generator carries dA^j_j/dp_i in qdot and -dA^j_j/dq^i in pdot; the
  // tensor route drops both. With tr alpha = nH/(n-1):
  const Eigen::VectorXd g = H.gradient(x) * (static_cast<double>(n) / (n - 1));
  Eigen::VectorXd trace_terms(4);
  trace_terms << g[2], g[3], -g[0], -g[1];
  CHECK(proptest::max_abs_diff(gap, -trace_terms) <= 1e-12);
}
