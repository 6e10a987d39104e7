#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "volflow/exterior.hpp"
#include "volflow/forms.hpp"

namespace volflow {

// The vector field obtained purely from the exterior algebra:
// the X with nu_n(X) = n(n-1) d alpha ^ omega^{n-2}.
FiberVector oracle_field(const PointwiseJet& jet);

struct SuiteResult {
  enum class Bound { AtMost, AtLeast };

  std::string name;
  double max_residual = 0.0;  // for AtLeast suites: the smallest observed value
  double tolerance = 0.0;
  Bound bound = Bound::AtMost;
  long samples = 0;
  bool pass = true;
  // Extra diagnostics, e.g. min_norm_ratio for the injectivity suites.
  std::vector<std::pair<std::string, double>> extras;
};

// Tolerances pinned for every suite.
namespace tolerance {
inline constexpr double kOracleRelative = 1e-10;
inline constexpr double kHamiltonianReduction = 1e-12;
inline constexpr double kDivergence = 1e-5;
inline constexpr double kGauge = 1e-10;
inline constexpr double kDotf = 1e-10;
inline constexpr double kPoissonTrace = 1e-12;
inline constexpr double kTraceClosedForm = 1e-10;
inline constexpr double kWedgeIdentity = 1e-12;
inline constexpr double kRoundTrip = 1e-12;
inline constexpr double kIotaInverse = 1e-10;
inline constexpr double kFengShangAgreement = 1e-10;
inline constexpr double kFengShangWitness = 1e-3;
inline constexpr double kDecomposition = 1e-10;
inline constexpr double kLinearity = 1e-10;
inline constexpr double kVolume = 1e-6;
inline constexpr double kSymplecticWitness = 1e-6;
inline constexpr double kHarmonicReturn = 1e-9;
inline constexpr double kDrift = 1e-12;
inline constexpr double kEnergyDrift = 1e-9;
}  // namespace tolerance

// Individual suites. `trials` is the number of random draws per n (for
// divergence, ten points are taken per draw).
SuiteResult suite_lemma1(const std::vector<int>& ns, int trials, std::uint64_t seed);
SuiteResult suite_lemma2(const std::vector<int>& ns, int trials, std::uint64_t seed);
SuiteResult suite_wedge_identities(const std::vector<int>& ns);
SuiteResult suite_oracle_equivalence(const std::vector<int>& ns, int trials, std::uint64_t seed);
SuiteResult suite_hamiltonian_reduction(const std::vector<int>& ns, int trials, std::uint64_t seed);
SuiteResult suite_divergence(const std::vector<int>& ns, int points, std::uint64_t seed);
SuiteResult suite_gauge_invariance(const std::vector<int>& ns, int trials, std::uint64_t seed);
SuiteResult suite_linearity(const std::vector<int>& ns, int trials, std::uint64_t seed);
SuiteResult suite_dotf(const std::vector<int>& ns, int trials, std::uint64_t seed);
SuiteResult suite_poisson_trace(const std::vector<int>& ns, int trials, std::uint64_t seed);
SuiteResult suite_trace_closed_form(const std::vector<int>& ns, int trials, std::uint64_t seed);
SuiteResult suite_feng_shang_agreement(const std::vector<int>& ns, int trials, std::uint64_t seed);
SuiteResult suite_feng_shang_witness(const std::vector<int>& ns, int trials, std::uint64_t seed);
SuiteResult suite_decomposition(const std::vector<int>& ns, int trials, std::uint64_t seed);

struct CheckOptions {
  std::vector<int> ns{2, 3};
  int trials = 100;
  std::uint64_t seed = 42;
};

std::vector<SuiteResult> run_check(const CheckOptions& options);

bool all_pass(const std::vector<SuiteResult>& results);

// JSON object {suite name: {max_residual, tolerance, pass, ...}}, 17
// significant digits, keys in suite order.
std::string report_json(const std::vector<SuiteResult>& results);

}  // namespace volflow
