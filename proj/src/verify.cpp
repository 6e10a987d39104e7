#include "volflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "volflow/dynamics.hpp"
#include "volflow/generator.hpp"
#include "volflow/random_fields.hpp"

namespace volflow {

namespace {

// Independent stream per suite so adding one suite never perturbs another.
Rng suite_rng(std::uint64_t seed, std::uint64_t suite_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite_id)};
  return Rng(seq);
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

SuiteResult at_most(std::string name, double residual, double tol, long samples) {
  SuiteResult r;
  r.name = std::move(name);
  r.max_residual = residual;
  r.tolerance = tol;
  r.samples = samples;
  r.pass = std::isfinite(residual) && residual <= tol;
  return r;
}

std::vector<int> at_least_two(const std::vector<int>& ns) {
  std::vector<int> out;
  for (int n : ns)
    if (n >= 2) out.push_back(n);
  return out;
}

}  // namespace

FiberVector oracle_field(const PointwiseJet& jet) {
  const int n = jet.n;
  const KForm target = wedge(d_at_point(jet), omega_power(n, n - 2)) * static_cast<double>(n * (n - 1));
  return solve_nu_n(target, n);
}

SuiteResult suite_lemma1(const std::vector<int>& ns, int trials, std::uint64_t seed) {
  double residual = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  bool ok = true;
  long samples = 0;
  Rng rng = suite_rng(seed, 1);
  for (int n : ns) {
    for (int k = 1; k <= n; ++k) {
      const Lemma1Report rep = verify_lemma1(n, k, trials, rng());
      ok = ok && rep.pass;
      if (trials > 0) min_ratio = std::min(min_ratio, rep.min_norm_ratio);
      samples += trials;
    }
    // nu_n round trip
    for (int t = 0; t < trials; ++t) {
      const FiberVector x = FiberVector(random_point(n, rng).coords());
      const FiberVector back = solve_nu_n(nu_k(x, n, n), n);
      residual = std::max(residual, inf_norm(back.components - x.components));
    }
  }
  SuiteResult r = at_most("lemma1_injectivity", residual, tolerance::kRoundTrip, samples);
  r.pass = r.pass && ok;
  if (samples > 0) r.extras.emplace_back("min_norm_ratio", min_ratio);
  return r;
}

SuiteResult suite_lemma2(const std::vector<int>& ns, int trials, std::uint64_t seed) {
  double residual = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  bool ok = true;
  long samples = 0;
  Rng rng = suite_rng(seed, 2);
  for (int n : at_least_two(ns)) {
    for (int k = 1; k <= n - 2; ++k) {
      const Lemma2Report rep = verify_lemma2(n, k, trials, rng());
      ok = ok && rep.pass;
      if (trials > 0) min_ratio = std::min(min_ratio, rep.min_norm_ratio);
      residual = std::max(residual, rep.iota_max_residual);
      samples += trials;
    }
    // iota itself, including n = 2 where it is the identity
    const IotaReport iota = verify_iota(n, trials, rng());
    ok = ok && iota.invertible;
    residual = std::max(residual, iota.max_residual);
    samples += trials;
  }
  SuiteResult r = at_most("lemma2_iota", residual, tolerance::kIotaInverse, samples);
  r.pass = r.pass && ok;
  if (std::isfinite(min_ratio)) r.extras.emplace_back("min_norm_ratio", min_ratio);
  return r;
}

SuiteResult suite_wedge_identities(const std::vector<int>& ns) {
  double residual = 0.0;
  long samples = 0;
  for (int n : at_least_two(ns)) {
    const WedgeIdentityReport rep = verify_wedge_identities(n, tolerance::kWedgeIdentity);
    residual = std::max(residual, rep.max_residual);
    samples += rep.triples;
  }
  return at_most("wedge_identities", residual, tolerance::kWedgeIdentity, samples);
}

SuiteResult suite_oracle_equivalence(const std::vector<int>& ns, int trials, std::uint64_t seed) {
  double residual = 0.0;
  long samples = 0;
  Rng rng = suite_rng(seed, 3);
  for (int n : at_least_two(ns)) {
    for (int t = 0; t < trials; ++t) {
      const TwoFormField alpha = random_two_form(n, rng);
      const PhaseState x = random_point(n, rng);
      const PointwiseJet jet = jet_at(alpha, x);
      const FiberVector formula = generate(alpha)(x);
      const FiberVector oracle = oracle_field(jet);
      const double rel = inf_norm(formula.components - oracle.components) / std::max(1.0, inf_norm(oracle.components));
      residual = std::max(residual, rel);
      ++samples;
    }
  }
  return at_most("oracle_equivalence", residual, tolerance::kOracleRelative, samples);
}

SuiteResult suite_hamiltonian_reduction(const std::vector<int>& ns, int trials, std::uint64_t seed) {
  constexpr int kPointsPerField = 10;
  double residual = 0.0;
  long samples = 0;
  Rng rng = suite_rng(seed, 4);
  for (int n : at_least_two(ns)) {
    for (int t = 0; t < trials; ++t) {
      const ScalarField H = random_scalar_field(n, rng);
      const GeneratedField via_alpha = generate(hamiltonian_two_form(H, n));
      const GeneratedField direct = hamiltonian_field(H, n);
      for (int s = 0; s < kPointsPerField; ++s) {
        const PhaseState x = random_point(n, rng);
        residual = std::max(residual, inf_norm(via_alpha(x).components - direct(x).components));
        ++samples;
      }
    }
  }
  return at_most("hamiltonian_reduction", residual, tolerance::kHamiltonianReduction, samples);
}

SuiteResult suite_divergence(const std::vector<int>& ns, int points, std::uint64_t seed) {
  constexpr int kPointsPerField = 10;
  double residual = 0.0;
  long samples = 0;
  Rng rng = suite_rng(seed, 5);
  for (int n : at_least_two(ns)) {
    std::optional<GeneratedField> field;
    for (int s = 0; s < points; ++s) {
      if (s % kPointsPerField == 0) field = generate(random_two_form(n, rng));
      residual = std::max(residual, std::abs(divergence_at(*field, random_point(n, rng))));
      ++samples;
    }
  }
  return at_most("divergence_free", residual, tolerance::kDivergence, samples);
}

SuiteResult suite_gauge_invariance(const std::vector<int>& ns, int trials, std::uint64_t seed) {
  constexpr int kPointsPerPair = 5;
  double residual = 0.0;
  long samples = 0;
  Rng rng = suite_rng(seed, 6);
  for (int n : at_least_two(ns)) {
    for (int t = 0; t < trials; ++t) {
      const TwoFormField alpha = random_two_form(n, rng);
      const OneFormField beta = random_one_form(n, rng);
      const GeneratedField x0 = generate(alpha);
      const GeneratedField x1 = generate(gauge_shift(alpha, beta));
      for (int s = 0; s < kPointsPerPair; ++s) {
        const PhaseState x = random_point(n, rng);
        residual = std::max(residual, inf_norm(x1(x).components - x0(x).components));
        ++samples;
      }
    }
  }
  return at_most("gauge_invariance", residual, tolerance::kGauge, samples);
}

SuiteResult suite_linearity(const std::vector<int>& ns, int trials, std::uint64_t seed) {
  double residual = 0.0;
  long samples = 0;
  Rng rng = suite_rng(seed, 7);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int n : at_least_two(ns)) {
    for (int t = 0; t < trials; ++t) {
      const TwoFormField a1 = random_two_form(n, rng);
      const TwoFormField a2 = random_two_form(n, rng);
      const double c1 = coeff(rng), c2 = coeff(rng);
      const PhaseState x = random_point(n, rng);
      const Eigen::VectorXd lhs = generate(c1 * a1 + c2 * a2)(x).components;
      const Eigen::VectorXd rhs = c1 * generate(a1)(x).components + c2 * generate(a2)(x).components;
      residual = std::max(residual, inf_norm(lhs - rhs));
      ++samples;
    }
  }
  return at_most("linearity", residual, tolerance::kLinearity, samples);
}

SuiteResult suite_dotf(const std::vector<int>& ns, int trials, std::uint64_t seed) {
  double residual = 0.0;
  long samples = 0;
  Rng rng = suite_rng(seed, 8);
  for (int n : at_least_two(ns)) {
    for (int t = 0; t < trials; ++t) {
      const TwoFormField alpha = random_two_form(n, rng);
      const ScalarField f = random_scalar_field(n, rng);
      residual = std::max(residual, check_dotf(alpha, f, random_point(n, rng)));
      ++samples;
    }
  }
  return at_most("dotf_identity", residual, tolerance::kDotf, samples);
}

SuiteResult suite_poisson_trace(const std::vector<int>& ns, int trials, std::uint64_t seed) {
  double residual = 0.0;
  long samples = 0;
  Rng rng = suite_rng(seed, 9);
  for (int n : ns) {
    for (int t = 0; t < trials; ++t) {
      const ScalarField f = random_scalar_field(n, rng);
      const ScalarField H = random_scalar_field(n, rng);
      const PhaseState x = random_point(n, rng);
      const double bracket = poisson_bracket(f, H, x);
      const double tr = trace_of(wedge(differential_at(f, x), differential_at(H, x)), n);
      residual = std::max(residual, std::abs(bracket + tr));
      ++samples;
    }
  }
  return at_most("poisson_trace", residual, tolerance::kPoissonTrace, samples);
}

SuiteResult suite_trace_closed_form(const std::vector<int>& ns, int trials, std::uint64_t seed) {
  double residual = 0.0;
  long samples = 0;
  Rng rng = suite_rng(seed, 10);
  for (int n : at_least_two(ns)) {
    for (int t = 0; t < trials; ++t) {
      const TwoFormField alpha = random_two_form(n, rng);
      const PhaseState x = random_point(n, rng);
      const double closed = trace(alpha, x);
      const double oracle = trace_of(alpha_at_point(jet_at(alpha, x)), n);
      residual = std::max(residual, std::abs(closed - oracle));
      ++samples;
    }
  }
  return at_most("trace_closed_form", residual, tolerance::kTraceClosedForm, samples);
}

SuiteResult suite_feng_shang_agreement(const std::vector<int>& ns, int trials, std::uint64_t seed) {
  constexpr int kPointsPerField = 5;
  double residual = 0.0;
  long samples = 0;
  Rng rng = suite_rng(seed, 11);
  RandomAlphaOptions traceless;
  traceless.traceless = true;
  for (int n : at_least_two(ns)) {
    for (int t = 0; t < trials; ++t) {
      const TwoFormField alpha = random_two_form(n, rng, traceless);
      const GeneratedField fs = feng_shang_field(feng_shang_from_alpha(alpha));
      const GeneratedField xh = generate(alpha);
      for (int s = 0; s < kPointsPerField; ++s) {
        const PhaseState x = random_point(n, rng);
        residual = std::max(residual, inf_norm(fs(x).components - xh(x).components));
        ++samples;
      }
    }
  }
  return at_most("feng_shang_agreement", residual, tolerance::kFengShangAgreement, samples);
}

SuiteResult suite_feng_shang_witness(const std::vector<int>& ns, int trials, std::uint64_t seed) {
  // alpha = H omega/(n-1) with non-constant H: the two routes must disagree.
  double min_gap = std::numeric_limits<double>::infinity();
  long samples = 0;
  Rng rng = suite_rng(seed, 12);
  for (int n : at_least_two(ns)) {
    for (int t = 0; t < trials; ++t) {
      // H = (random quadratic) + p_1 keeps dH away from zero at the sample point
      const Polynomial base = random_polynomial(2 * n, 2, 3, rng) + Polynomial::variable(2 * n, n);
      const TwoFormField alpha = hamiltonian_two_form(ScalarField::from_polynomial(base), n);
      const PhaseState x = random_point(n, rng, 0.1);
      const Eigen::VectorXd gap =
          feng_shang_field(feng_shang_from_alpha(alpha))(x).components - generate(alpha)(x).components;
      min_gap = std::min(min_gap, inf_norm(gap));
      ++samples;
    }
  }
  SuiteResult r;
  r.name = "feng_shang_trace_witness";
  r.bound = SuiteResult::Bound::AtLeast;
  r.tolerance = tolerance::kFengShangWitness;
  r.samples = samples;
  r.max_residual = samples > 0 ? min_gap : 0.0;
  r.pass = samples == 0 || min_gap >= tolerance::kFengShangWitness;
  return r;
}

SuiteResult suite_decomposition(const std::vector<int>& ns, int trials, std::uint64_t seed) {
  double residual = 0.0;
  long samples = 0;
  Rng rng = suite_rng(seed, 13);
  for (int n : at_least_two(ns)) {
    for (int t = 0; t < trials; ++t) {
      const TwoFormField alpha = random_two_form(n, rng);
      const auto [trace_part, extra] = decompose(alpha);
      const PhaseState x = random_point(n, rng);
      const Eigen::VectorXd sum = trace_part(x).components + extra(x).components;
      residual = std::max(residual, inf_norm(sum - generate(alpha)(x).components));
      ++samples;
    }
  }
  return at_most("decomposition", residual, tolerance::kDecomposition, samples);
}

std::vector<SuiteResult> run_check(const CheckOptions& options) {
  for (int n : options.ns)
    if (n < 1 || n > 4) throw std::invalid_argument("check: n must be in 1..4, got " + std::to_string(n));
  if (options.trials < 0) throw std::invalid_argument("check: trials must be >= 0");
  const auto& ns = options.ns;
  const int t = options.trials;
  const auto s = options.seed;
  std::vector<SuiteResult> out;
  out.push_back(suite_lemma1(ns, t, s));
  out.push_back(suite_lemma2(ns, t, s));
  out.push_back(suite_wedge_identities(t > 0 ? ns : std::vector<int>{}));
  out.push_back(suite_oracle_equivalence(ns, t, s));
  out.push_back(suite_hamiltonian_reduction(ns, t, s));
  out.push_back(suite_divergence(ns, 10 * t, s));
  out.push_back(suite_gauge_invariance(ns, t, s));
  out.push_back(suite_linearity(ns, t, s));
  out.push_back(suite_dotf(ns, t, s));
  out.push_back(suite_poisson_trace(ns, t, s));
  out.push_back(suite_trace_closed_form(ns, t, s));
  out.push_back(suite_decomposition(ns, t, s));
  out.push_back(suite_feng_shang_agreement(ns, t, s));
  out.push_back(suite_feng_shang_witness(ns, t, s));
  return out;
}

bool all_pass(const std::vector<SuiteResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.pass; });
}

std::string report_json(const std::vector<SuiteResult>& results) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& r : results) {
    nlohmann::ordered_json e;
    e["max_residual"] = r.max_residual;
    e["tolerance"] = r.tolerance;
    e["pass"] = r.pass;
    e["bound"] = r.bound == SuiteResult::Bound::AtMost ? "at_most" : "at_least";
    e["samples"] = r.samples;
    for (const auto& [k, v] : r.extras) e[k] = v;
    j[r.name] = std::move(e);
  }
  return j.dump(2);
}

}  // namespace volflow
