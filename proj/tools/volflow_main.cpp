// volflow: simulate built-in systems, run the verification suites, and
// compare the coordinate formula with the exterior-algebra solve at a point.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "volflow/generator.hpp"
#include "volflow/run.hpp"
#include "volflow/spec_parse.hpp"
#include "volflow/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::uint64_t env_seed(std::uint64_t fallback) {
  const char* s = std::getenv("VOLFLOW_SEED");
  if (!s || !*s) return fallback;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("VOLFLOW_SEED is not an integer: ") + s);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct SimulateArgs {
  std::string config;
  std::optional<double> dt;
  std::optional<int> steps;
  std::string out, diag;
};

int cmd_simulate(const SimulateArgs& a) {
  volflow::RunConfig cfg = volflow::parse_run_config(read_file(a.config), env_seed(42));
  if (a.dt) cfg.dt = *a.dt;
  if (a.steps) cfg.steps = *a.steps;
  if (!a.out.empty()) cfg.trajectory_path = a.out;
  if (!a.diag.empty()) cfg.diagnostics_path = a.diag;
  cfg.validate();

  const volflow::SimulationResult r = volflow::run_simulation(cfg);
  const std::string csv = volflow::trajectory_csv(r, cfg.sample_every);
  const std::string diag = volflow::diagnostics_json(r);
  if (cfg.trajectory_path.empty()) std::cout << csv;
  else write_file(cfg.trajectory_path, csv);
  if (cfg.diagnostics_path.empty()) std::cerr << diag << '\n';
  else write_file(cfg.diagnostics_path, diag + "\n");

  if (r.diagnostics.trajectory.failed) {
    std::cerr << "volflow: integration stopped at t = " << g17(r.diagnostics.trajectory.times.back()) << ": "
              << r.diagnostics.trajectory.failure << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

struct CheckArgs {
  std::string ns = "2,3";
  int trials = 100;
  std::optional<std::uint64_t> seed;
  std::string report;
};

int cmd_check(const CheckArgs& a) {
  volflow::CheckOptions opts;
  opts.ns = volflow::parse_int_list(a.ns);
  opts.trials = a.trials;
  opts.seed = a.seed ? *a.seed : env_seed(42);
  const auto results = volflow::run_check(opts);
  const std::string json = volflow::report_json(results);
  if (a.report.empty()) std::cout << json << '\n';
  else write_file(a.report, json + "\n");
  for (const auto& r : results)
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << g17(r.max_residual)
              << (r.bound == volflow::SuiteResult::Bound::AtMost ? " <= " : " >= ") << g17(r.tolerance) << '\n';
  return volflow::all_pass(results) ? kExitOk : kExitFailure;
}

struct OracleArgs {
  std::string alpha;
  std::string point;
};

int cmd_oracle(const OracleArgs& a) {
  const std::vector<double> pt = volflow::parse_real_list(a.point);
  if (pt.size() < 4 || pt.size() % 2 != 0)
    throw std::invalid_argument("point must have 2n entries with n >= 2");
  const int n = static_cast<int>(pt.size() / 2);
  const volflow::TwoFormField alpha = volflow::parse_alpha_spec(a.alpha, n);
  const volflow::PhaseState x(Eigen::Map<const Eigen::VectorXd>(pt.data(), static_cast<Eigen::Index>(pt.size())));

  const Eigen::VectorXd formula = volflow::generate(alpha)(x).components;
  const Eigen::VectorXd oracle = volflow::oracle_field(volflow::jet_at(alpha, x)).components;
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("q" + std::to_string(i));
  for (int i = 1; i <= n; ++i) names.push_back("p" + std::to_string(i));

  std::cout << "component,formula,oracle,residual\n";
  double worst = 0.0;
  for (int i = 0; i < 2 * n; ++i) {
    const double res = std::abs(formula[i] - oracle[i]);
    worst = std::max(worst, res);
    std::cout << names[static_cast<std::size_t>(i)] << ',' << g17(formula[i]) << ',' << g17(oracle[i]) << ','
              << g17(res) << '\n';
  }
  const double rel = worst / std::max(1.0, oracle.cwiseAbs().maxCoeff());
  std::cout << "max_relative_residual," << g17(rel) << '\n';
  return rel <= volflow::tolerance::kOracleRelative ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volume-preserving flows generated by 2-forms on R^{2n}"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Integrate a built-in system and write trajectory and diagnostics");
  s->add_option("--config", sim.config, "JSON run configuration")->required();
  s->add_option("--dt", sim.dt, "Time step (overrides config)");
  s->add_option("--steps", sim.steps, "Number of steps (overrides config)");
  s->add_option("--out", sim.out, "Trajectory CSV path (overrides config)");
  s->add_option("--diag", sim.diag, "Diagnostics JSON path (overrides config)");

  CheckArgs chk;
  auto* c = app.add_subcommand("check", "Run the verification suites");
  c->add_option("--n", chk.ns, "Comma-separated list of n")->capture_default_str();
  c->add_option("--trials", chk.trials, "Random draws per n")->capture_default_str();
  c->add_option("--seed", chk.seed, "RNG seed (default: $VOLFLOW_SEED or 42)");
  c->add_option("--report", chk.report, "Write the JSON report here instead of stdout");

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "Compare the coordinate formula with the exterior-algebra solve");
  o->add_option("--alpha", orc.alpha, "zero | coupled-oscillators | random:<seed> | NAME=expr;...")->required();
  o->add_option("--point", orc.point, "Comma-separated q1..qn,p1..pn")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s) return cmd_simulate(sim);
    if (*c) return cmd_check(chk);
    return cmd_oracle(orc);
  } catch (const std::invalid_argument& e) {
    std::cerr << "volflow: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "volflow: " << e.what() << '\n';
    return kExitFailure;
  }
}
