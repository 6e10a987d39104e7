#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "volflow/dynamics.hpp"
#include "volflow/systems.hpp"

namespace volflow {

struct RunConfig {
  std::string system;
  // Raw JSON text of the "params" object ("{}" when absent).
  std::string params = "{}";
  std::optional<int> n;
  std::vector<double> x0;  // empty: the system default
  double dt = 1e-3;
  int steps = 1000;
  int sample_every = 100;
  std::uint64_t seed = 42;
  std::string trajectory_path;
  std::string diagnostics_path;

  // Throws std::invalid_argument on dt <= 0, steps < 1, sample_every < 1.
  void validate() const;
};

// Parses a JSON config document. Missing seed falls back to `fallback_seed`.
RunConfig parse_run_config(const std::string& json_text, std::uint64_t fallback_seed = 42);

// Names accepted in RunConfig::system.
std::vector<std::string> system_names();

// Instantiates the configured system; also checks x0 against n.
SystemInstance build_system(const RunConfig& config);

struct SimulationResult {
  SystemInstance system;
  PhaseState x0;
  FlowDiagnostics diagnostics;
  double energy_drift = 0.0;  // NaN when the system has no Hamiltonian
  bool symplectic = false;
};

SimulationResult run_simulation(const RunConfig& config);

// Header t,q1..qn,p1..pn and one row per sample, 17 significant digits.
std::string trajectory_csv(const SimulationResult& result, int sample_every);
std::string diagnostics_json(const SimulationResult& result);

}  // namespace volflow
