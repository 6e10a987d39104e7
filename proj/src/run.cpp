#include "volflow/run.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace volflow {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Eigen::MatrixXd matrix_param(const json& params, const char* key) {
  if (!params.contains(key)) throw std::invalid_argument(std::string("missing parameter '") + key + "'");
  const json& rows = params.at(key);
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument(std::string("'") + key + "' must be a matrix");
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (!rows[i].is_array() || static_cast<Eigen::Index>(rows[i].size()) != c)
      throw std::invalid_argument(std::string("'") + key + "' rows differ in length");
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

double number_param(const json& params, const char* key, double fallback) {
  return params.contains(key) ? params.at(key).get<double>() : fallback;
}

void require_n(const RunConfig& c, int n) {
  if (c.n && *c.n != n)
    throw std::invalid_argument("n = " + std::to_string(*c.n) + " does not match system '" + c.system +
                                "' (n = " + std::to_string(n) + ")");
}

}  // namespace

void RunConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  if (n && *n < 1) throw std::invalid_argument("n must be >= 1");
  if (n && !x0.empty() && static_cast<int>(x0.size()) != 2 * *n)
    throw std::invalid_argument("x0 has " + std::to_string(x0.size()) + " entries, expected 2n = " +
                                std::to_string(2 * *n));
}

RunConfig parse_run_config(const std::string& json_text, std::uint64_t fallback_seed) {
  RunConfig c;
  c.seed = fallback_seed;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    const json& sys = j.at("system");
    if (sys.is_string()) {
      c.system = sys.get<std::string>();
    } else {
      c.system = sys.at("name").get<std::string>();
      if (sys.contains("params")) c.params = sys.at("params").dump();
    }
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("x0")) c.x0 = j.at("x0").get<std::vector<double>>();
    if (j.contains("dt")) c.dt = j.at("dt").get<double>();
    if (j.contains("steps")) c.steps = j.at("steps").get<int>();
    if (j.contains("sample_every")) c.sample_every = j.at("sample_every").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("outputs")) {
      const json& o = j.at("outputs");
      if (o.contains("trajectory")) c.trajectory_path = o.at("trajectory").get<std::string>();
      if (o.contains("diagnostics")) c.diagnostics_path = o.at("diagnostics").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<std::string> system_names() {
  return {"harmonic", "linear", "coupled-oscillators", "drift", "random-alpha", "zero"};
}

SystemInstance build_system(const RunConfig& c) {
  c.validate();
  json params;
  try {
    params = json::parse(c.params);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("params: ") + e.what());
  }
  const int n_from_x0 = c.x0.empty() ? 0 : static_cast<int>(c.x0.size() / 2);
  const int n_hint = c.n ? *c.n : n_from_x0;

  try {
    SystemInstance s = [&]() -> SystemInstance {
      if (c.system == "harmonic") {
        std::vector<double> w;
        if (params.contains("frequencies")) w = params.at("frequencies").get<std::vector<double>>();
        const int n = !w.empty() ? static_cast<int>(w.size()) : std::max(1, n_hint);
        if (w.empty()) w.assign(static_cast<std::size_t>(n), 1.0);
        require_n(c, n);
        return harmonic_oscillator(n, w);
      }
      if (c.system == "linear") {
        const Eigen::MatrixXd k = matrix_param(params, "k");
        require_n(c, static_cast<int>(k.rows()));
        return linear_system(k);
      }
      if (c.system == "coupled-oscillators") {
        require_n(c, 2);
        return coupled_oscillators(number_param(params, "m1", 1.0), number_param(params, "m2", 2.0),
                                   number_param(params, "k", 1.0));
      }
      if (c.system == "drift") {
        const Eigen::MatrixXd a = matrix_param(params, "a");
        const int n = static_cast<int>(a.rows());
        require_n(c, n);
        std::vector<double> q0(static_cast<std::size_t>(n), 1.0), p0(static_cast<std::size_t>(n), 0.0);
        if (!c.x0.empty() && static_cast<int>(c.x0.size()) == 2 * n) {
          q0.assign(c.x0.begin(), c.x0.begin() + n);
          p0.assign(c.x0.begin() + n, c.x0.end());
        }
        return drift_system(a, q0, p0);
      }
      if (c.system == "random-alpha") {
        const int n = n_hint > 0 ? n_hint : 2;
        RandomAlphaOptions o;
        o.max_degree = static_cast<int>(number_param(params, "max_degree", o.max_degree));
        o.terms_per_component = static_cast<int>(number_param(params, "terms", o.terms_per_component));
        o.amplitude = number_param(params, "amplitude", o.amplitude);
        if (params.contains("traceless")) o.traceless = params.at("traceless").get<bool>();
        return random_alpha_system(n, c.seed, o);
      }
      if (c.system == "zero") return zero_system(n_hint > 0 ? n_hint : 1);
      throw std::invalid_argument("unknown system '" + c.system + "'");
    }();
    if (!c.x0.empty() && static_cast<int>(c.x0.size()) != s.default_x0.dim())
      throw std::invalid_argument("x0 has " + std::to_string(c.x0.size()) + " entries, system '" + c.system +
                                  "' needs " + std::to_string(s.default_x0.dim()));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("params: ") + e.what());
  }
}

SimulationResult run_simulation(const RunConfig& config) {
  SimulationResult r{build_system(config), {}, {}, std::numeric_limits<double>::quiet_NaN(), false};
  r.x0 = config.x0.empty() ? r.system.default_x0
                           : PhaseState(Eigen::Map<const Eigen::VectorXd>(config.x0.data(),
                                                                           static_cast<Eigen::Index>(config.x0.size())));
  std::vector<Observable> obs;
  if (r.system.hamiltonian) obs.push_back({"energy", *r.system.hamiltonian});
  MonitorOptions opts;
  opts.sample_every = config.sample_every;
  r.diagnostics = monitor(r.system.field, r.x0, config.dt, config.steps, obs, opts);
  if (r.system.hamiltonian) r.energy_drift = r.diagnostics.observable_drift("energy");
  r.symplectic = r.diagnostics.max_symplecticity() <= 1e-6;
  return r;
}

std::string trajectory_csv(const SimulationResult& result, int sample_every) {
  const int n = result.x0.n();
  std::ostringstream out;
  out << 't';
  for (int i = 1; i <= n; ++i) out << ",q" << i;
  for (int i = 1; i <= n; ++i) out << ",p" << i;
  out << '\n';
  const Trajectory& tr = result.diagnostics.trajectory;
  for (std::size_t k = 0; k < tr.states.size(); k += static_cast<std::size_t>(sample_every)) {
    out << fmt17(tr.times[k]);
    const auto& x = tr.states[k].coords();
    for (Eigen::Index i = 0; i < x.size(); ++i) out << ',' << fmt17(x[i]);
    out << '\n';
  }
  return out.str();
}

std::string diagnostics_json(const SimulationResult& result) {
  const FlowDiagnostics& d = result.diagnostics;
  nlohmann::ordered_json j;
  j["system"] = result.system.name;
  j["n"] = result.x0.n();
  j["volume_det_max_abs_err"] = d.volume_dets.empty() ? json(nullptr) : json(d.max_volume_error());
  j["divergence_max_abs"] = d.max_abs_divergence();
  j["energy_drift"] = std::isnan(result.energy_drift) ? json(nullptr) : json(result.energy_drift);
  j["symplectic"] = result.symplectic;
  j["symplecticity_max"] = d.max_symplecticity();
  j["failed"] = d.trajectory.failed;
  j["last_valid_index"] = d.trajectory.last_valid;
  if (d.trajectory.failed) j["failure"] = d.trajectory.failure;
  j["sample_times"] = d.sample_times;
  j["volume_dets"] = d.volume_dets;
  j["divergence"] = d.divergence_samples;
  j["symplecticity"] = d.symplecticity_samples;
  for (const auto& [name, v] : d.observables) j["observables"][name] = v;
  for (const auto& [name, v] : d.identity_residuals) j["identity_residuals"][name] = v;
  return j.dump(2);
}

}  // namespace volflow
