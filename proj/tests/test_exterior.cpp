#include "doctest.h"
#include "property.hpp"
#include "volflow/exterior.hpp"

using namespace volflow;

namespace {

// Sign of the permutation sorting `idx` (distinct entries), by counting inversions.
double perm_sign(const std::vector<int>& idx) {
  int inv = 0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b)
      if (idx[a] > idx[b]) ++inv;
  return inv % 2 ? -1.0 : 1.0;
}

}  // namespace

TEST_CASE("monomial sorts its indices with the permutation sign") {
  CHECK(KForm::monomial(4, {1, 0}).coeff({0, 1}) == -1.0);
  CHECK(KForm::monomial(4, {2, 0, 3, 1}).coeff({0, 1, 2, 3}) == perm_sign({2, 0, 3, 1}));
  CHECK(KForm::monomial(4, {2, 2}).max_abs() == 0.0);
  CHECK_THROWS_AS(KForm::monomial(4, {0, 4}), std::out_of_range);
}

TEST_CASE("wedge of 1-forms anticommutes and 2-forms commute") {
  proptest::for_all(20, 1, [](auto& rng, int) {
    const KForm a = KForm::one_form(proptest::uniform_vector(rng, 6));
    const KForm b = KForm::one_form(proptest::uniform_vector(rng, 6));
    CHECK(wedge(a, b).approx_equal(wedge(b, a) * -1.0));
    CHECK(wedge(a, a).max_abs() < 1e-15);
    const KForm c = wedge(a, b);
    const KForm d = wedge(KForm::one_form(proptest::uniform_vector(rng, 6)), b);
    CHECK(wedge(c, d).approx_equal(wedge(d, c)));
  });
}

TEST_CASE("wedge rejects mismatched or overflowing degrees") {
  CHECK_THROWS_AS(wedge(KForm(4, 1), KForm(6, 1)), std::invalid_argument);
  CHECK_THROWS_AS(wedge(KForm(4, 3), KForm(4, 2)), std::invalid_argument);
}

TEST_CASE("omega powers match hand expansion") {
  // omega = dp1^dq1 + dp2^dq2 with (q1,q2,p1,p2) = (0,1,2,3)
  const KForm w = omega(2);
  CHECK(w.coeff({0, 2}) == -1.0);
  CHECK(w.coeff({1, 3}) == -1.0);
  // omega^2 = 2 dp1^dq1^dp2^dq2
  CHECK(omega_power(2, 2).approx_equal(KForm::monomial(4, {2, 0, 3, 1}, 2.0)));
  CHECK(omega_power(2, 2).coeff({0, 1, 2, 3}) == doctest::Approx(2.0 * perm_sign({2, 0, 3, 1})));
  // omega^3 at n = 3 = 3! dp1^dq1^dp2^dq2^dp3^dq3
  CHECK(omega_power(3, 3).approx_equal(KForm::monomial(6, {3, 0, 4, 1, 5, 2}, 6.0)));
  CHECK(omega_power(3, 0).approx_equal(KForm::scalar(6, 1.0)));
  CHECK_THROWS_AS(omega_power(2, 3), std::invalid_argument);
}

TEST_CASE("contraction signs") {
  const int n = 1;
  // i_{d/dq1}(dp1^dq1) = -dp1, i_{d/dp1} omega = dq1
  CHECK(contract(FiberVector::basis(n, 0), omega(n)).approx_equal(KForm::monomial(2, {1}, -1.0)));
  CHECK(contract(FiberVector::basis(n, 1), omega(n)).approx_equal(KForm::monomial(2, {0}, 1.0)));
  CHECK_THROWS_AS(contract(FiberVector::basis(n, 0), KForm::scalar(2, 1.0)), std::invalid_argument);
}

TEST_CASE("contraction is a graded derivation: i_X(omega^2) = 2 (i_X omega) ^ omega") {
  proptest::for_all(20, 2, [](auto& rng, int) {
    const FiberVector x(proptest::uniform_vector(rng, 4));
    const KForm lhs = contract(x, omega_power(2, 2));
    CHECK(lhs.approx_equal(wedge(contract(x, omega(2)), omega(2)) * 2.0));
    CHECK(nu_k(x, 2, 2).approx_equal(wedge(contract(x, omega(2)), omega(2)) * -2.0));
  });
}

TEST_CASE("solve_nu_n inverts nu_n") {
  for (int n = 1; n <= 4; ++n) {
    for (int j = 0; j < 2 * n; ++j) {
      const FiberVector e = FiberVector::basis(n, j);
      const FiberVector back = solve_nu_n(nu_k(e, n, n), n);
      CHECK(proptest::max_abs_diff(back.components, e.components) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(solve_nu_n(KForm(4, 2), 2), std::invalid_argument);
}

TEST_CASE("trace and top-form ratio") {
  for (int n = 1; n <= 4; ++n) {
    CHECK(omega_n_ratio(omega_power(n, n), n) == doctest::Approx(1.0));
    // omega has A^i_i = 1 for every i
    CHECK(trace_of(omega(n), n) == doctest::Approx(static_cast<double>(n)));
  }
  // dq1^dq2 has no dp^dq part
  CHECK(trace_of(KForm::monomial(4, {0, 1}), 2) == doctest::Approx(0.0));
  CHECK_THROWS_AS(trace_of(KForm(4, 1), 2), std::invalid_argument);
}

TEST_CASE("alpha and d alpha at a point") {
  // alpha = q1 dp1^dq2 at q1 = 0.5: A(0,1) = 0.5, dA(0,1)/dq1 = 1
  PointwiseJet jet = PointwiseJet::zero(2);
  jet.A(0, 1) = 0.5;
  jet.dA_dq(0, 1, 0) = 1.0;
  CHECK(alpha_at_point(jet).approx_equal(KForm::monomial(4, {2, 1}, 0.5)));
  // d alpha = dq1 ^ dp1 ^ dq2
  CHECK(d_at_point(jet).approx_equal(KForm::monomial(4, {0, 2, 1})));

  PointwiseJet bad = PointwiseJet::zero(2);
  bad.Q(0, 1) = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.Q(1, 0) = -1.0;
  CHECK_NOTHROW(bad.validate());
}

TEST_CASE("injectivity of nu_k over the full k range") {
  for (int n = 1; n <= 4; ++n) {
    for (int k = 1; k <= n; ++k) {
      const Lemma1Report r = verify_lemma1(n, k, 100, 7);
      CAPTURE(n);
      CAPTURE(k);
      CHECK(r.pass);
      CHECK(r.zero_maps_to_zero);
      CHECK(r.rank == 2 * n);
      CHECK(r.min_norm_ratio > kInjectivityFloor);
    }
  }
}

TEST_CASE("injectivity of alpha -> alpha ^ omega^k for k <= n - 2") {
  for (int n = 3; n <= 4; ++n) {
    for (int k = 1; k <= n - 2; ++k) {
      const Lemma2Report r = verify_lemma2(n, k, 100, 7);
      CAPTURE(n);
      CAPTURE(k);
      CHECK(r.pass);
      CHECK(r.iota_invertible);
      CHECK(r.iota_max_residual <= 1e-10);
    }
  }
  CHECK_THROWS_AS(verify_lemma2(2, 1, 10), std::invalid_argument);
  CHECK_THROWS_AS(verify_lemma2(4, 3, 10), std::invalid_argument);
  for (int n = 2; n <= 4; ++n) {
    const IotaReport r = verify_iota(n, 50, 3);
    CHECK(r.invertible);
    CHECK(r.max_residual <= 1e-10);
  }
}

TEST_CASE("wedge identities, including the n = 2 hand example") {
  // dp1^dp2^dq1 == (delta^1_2 dp1 - delta^1_1 dp2) ^ omega / (n - 1)
  const KForm lhs = KForm::monomial(4, {2, 3, 0});
  const KForm rhs = wedge(KForm::monomial(4, {3}, -1.0), omega(2));
  CHECK(lhs.approx_equal(rhs));
  for (int n = 2; n <= 3; ++n) {
    const WedgeIdentityReport r = verify_wedge_identities(n, 1e-12);
    CHECK(r.pass);
    CHECK(r.max_residual <= 1e-12);
    CHECK(r.triples == n * n * n);
  }
}

TEST_CASE("dense round trip") {
  proptest::for_all(5, 3, [](auto& rng, int) {
    const KForm a = wedge(KForm::one_form(proptest::uniform_vector(rng, 6)),
                          KForm::one_form(proptest::uniform_vector(rng, 6)));
    CHECK(KForm::from_dense(6, 2, a.to_dense()).approx_equal(a));
  });
  CHECK(KForm::basis_tuples(6, 3).size() == 20);
}
