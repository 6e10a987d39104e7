#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "volflow/dynamics.hpp"
#include "volflow/generator.hpp"
#include "volflow/run.hpp"
#include "volflow/spec_parse.hpp"
#include "volflow/verify.hpp"

namespace py = pybind11;
using namespace volflow;

namespace {

PhaseState as_state(const Eigen::VectorXd& x) {
  if (x.size() < 2 || x.size() % 2 != 0) throw std::invalid_argument("point must have 2n entries");
  return PhaseState(x);
}

int dof(const Eigen::VectorXd& x) { return static_cast<int>(x.size() / 2); }

ScalarField scalar(const std::string& expr, int n) { return ScalarField::from_polynomial(parse_polynomial(expr, n)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Volume-preserving vector fields generated by 2-forms on R^{2n}";

  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);

  m.def(
      "generate",
      [](const std::string& alpha, const Eigen::VectorXd& x) {
        return generate(parse_alpha_spec(alpha, dof(x)))(as_state(x)).components;
      },
      py::arg("alpha"), py::arg("point"), "Field generated by the 2-form spec at a point (q1..qn, p1..pn).");
  m.def(
      "oracle",
      [](const std::string& alpha, const Eigen::VectorXd& x) {
        return oracle_field(jet_at(parse_alpha_spec(alpha, dof(x)), as_state(x))).components;
      },
      py::arg("alpha"), py::arg("point"), "The same field from the exterior-algebra solve.");
  m.def(
      "hamiltonian_field",
      [](const std::string& H, const Eigen::VectorXd& x) {
        return hamiltonian_field(scalar(H, dof(x)), dof(x))(as_state(x)).components;
      },
      py::arg("H"), py::arg("point"));
  m.def(
      "divergence",
      [](const std::string& alpha, const Eigen::VectorXd& x) {
        return divergence_at(generate(parse_alpha_spec(alpha, dof(x))), as_state(x));
      },
      py::arg("alpha"), py::arg("point"));
  m.def(
      "trace",
      [](const std::string& alpha, const Eigen::VectorXd& x) { return trace(parse_alpha_spec(alpha, dof(x)), as_state(x)); },
      py::arg("alpha"), py::arg("point"));
  m.def(
      "poisson_bracket",
      [](const std::string& f, const std::string& g, const Eigen::VectorXd& x) {
        return poisson_bracket(scalar(f, dof(x)), scalar(g, dof(x)), as_state(x));
      },
      py::arg("f"), py::arg("g"), py::arg("point"));
  m.def(
      "omega_power",
      [](int n, int k) {
        py::dict out;
        const KForm w = omega_power(n, k);
        for (const auto& [idx, c] : w.terms()) {
          py::tuple key(idx.size());
          for (std::size_t i = 0; i < idx.size(); ++i) key[i] = idx[i];
          out[key] = c;
        }
        return out;
      },
      py::arg("n"), py::arg("k"), "Nonzero coefficients of omega^k keyed by increasing index tuples.");
  m.def(
      "check_report",
      [](const std::vector<int>& ns, int trials, std::uint64_t seed) {
        CheckOptions o;
        o.ns = ns;
        o.trials = trials;
        o.seed = seed;
        const auto results = run_check(o);
        return py::make_tuple(all_pass(results), report_json(results));
      },
      py::arg("ns") = std::vector<int>{2, 3}, py::arg("trials") = 100, py::arg("seed") = 42);
  m.def(
      "simulate_json",
      [](const std::string& config) {
        const RunConfig c = parse_run_config(config);
        const SimulationResult r = run_simulation(c);
        const Trajectory& tr = r.diagnostics.trajectory;
        Eigen::MatrixXd states(static_cast<Eigen::Index>(tr.states.size()), r.x0.dim());
        for (std::size_t k = 0; k < tr.states.size(); ++k) states.row(static_cast<Eigen::Index>(k)) = tr.states[k].coords();
        const Eigen::VectorXd times = Eigen::Map<const Eigen::VectorXd>(tr.times.data(), static_cast<Eigen::Index>(tr.times.size()));
        return py::make_tuple(times, states, diagnostics_json(r));
      },
      py::arg("config"));
  m.def("system_names", &system_names);
}
