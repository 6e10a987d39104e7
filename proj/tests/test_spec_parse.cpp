#include "doctest.h"
#include "json.hpp"
#include "volflow/run.hpp"
#include "volflow/spec_parse.hpp"
#include "volflow/verify.hpp"

using namespace volflow;

namespace {

PhaseState point(std::initializer_list<double> c) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(c.size()));
  int i = 0;
  for (double x : c) v[i++] = x;
  return PhaseState(v);
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("alpha specs") {
  const PhaseState x = point({0.3, -0.7, 1.1, 0.4});
  CHECK(generate(parse_alpha_spec("zero", 2))(x).components.isZero());
  const Eigen::VectorXd e4 = Eigen::Vector4d(0, 0, 0, 1);
  CHECK(generate(parse_alpha_spec("A12=q1", 2))(x).components == e4);
  CHECK((generate(parse_alpha_spec(" H = p1 ", 2))(x).components - Eigen::Vector4d(1, 0, 0, 0)).norm() <= 1e-15);
  const TwoFormField q = parse_alpha_spec("Q21=q1*p2; P12=2", 2);
  CHECK(q.Q(0, 1).value(x) == doctest::Approx(-0.3 * 0.4));
  CHECK(q.P(1, 0).value(x) == doctest::Approx(-2.0));
  CHECK(parse_alpha_spec("random:5", 3).n() == 3);
  const auto co = parse_alpha_spec("coupled-oscillators", 2);
  CHECK(co.Q(0, 1).value(point({1, 0, 0, 0})) == 0.0);

  CHECK_THROWS_AS(parse_alpha_spec("A13=q1", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_spec("Q11=q1", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_spec("B12=q1", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_spec("A12", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_spec("A12=x", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_spec("zero", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_spec("coupled-oscillators", 3), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_spec("random:abc", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_spec("", 2), std::invalid_argument);
}

TEST_CASE("number lists") {
  CHECK(parse_real_list("1, 2.5,-3e-1") == std::vector<double>{1, 2.5, -0.3});
  CHECK(parse_int_list("2,3") == std::vector<int>{2, 3});
  CHECK_THROWS_AS(parse_real_list("1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real_list("1,x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_int_list("2.5"), std::invalid_argument);
}

TEST_CASE("run config parsing and validation") {
  const RunConfig c = parse_run_config(R"({"system":{"name":"harmonic","params":{"frequencies":[2]}},
    "n":1,"x0":[1,0],"dt":0.01,"steps":10,"sample_every":5,
    "outputs":{"trajectory":"t.csv","diagnostics":"d.json"}})",
                                       7);
  CHECK(c.system == "harmonic");
  CHECK(c.seed == 7);
  CHECK(c.trajectory_path == "t.csv");
  CHECK(parse_run_config(R"({"system":"zero","seed":3})", 7).seed == 3);

  CHECK_THROWS_AS(parse_run_config("{", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config("[1]", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"n":2})", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"system":"zero","dt":0})", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"system":"zero","steps":0})", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"system":"zero","sample_every":0})", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"system":"zero","n":2,"x0":[1,2,3]})", 1), std::invalid_argument);
  CHECK_THROWS_AS(build_system(parse_run_config(R"({"system":"nope"})", 1)), std::invalid_argument);
  CHECK_THROWS_AS(build_system(parse_run_config(R"({"system":"coupled-oscillators","n":3})", 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_system(parse_run_config(R"({"system":{"name":"linear","params":{"k":[[1,2],[3]]}}})", 1)),
                  std::invalid_argument);
  for (const auto& name : system_names()) CHECK_NOTHROW(build_system(parse_run_config(
      name == "linear" ? R"({"system":{"name":"linear","params":{"k":[[1,0],[0,1]]}}})"
      : name == "drift" ? R"({"system":{"name":"drift","params":{"a":[[0,1],[-1,0]]}}})"
                        : "{\"system\":\"" + name + "\"}",
      1)));
}

TEST_CASE("zero-field simulation writes identical rows") {
  RunConfig c = parse_run_config(R"({"system":"zero","n":2,"x0":[1,2,3,4],"dt":0.1,"steps":7,"sample_every":2})");
  const SimulationResult r = run_simulation(c);
  const std::string csv = trajectory_csv(r, c.sample_every);
  CHECK(count_lines(csv) == 1 + 7 / 2 + 1);
  CHECK(csv.substr(0, csv.find('\n')) == "t,q1,q2,p1,p2");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) CHECK(line.substr(line.find(',')) == ",1,2,3,4");
}

TEST_CASE("coupled-oscillator diagnostics") {
  const RunConfig c = parse_run_config(
      R"({"system":{"name":"coupled-oscillators"},"dt":0.001,"steps":10000,"sample_every":1000})");
  const SimulationResult r = run_simulation(c);
  const auto j = nlohmann::json::parse(diagnostics_json(r));
  CHECK(j.at("volume_det_max_abs_err").get<double>() <= 1e-6);
  CHECK(j.at("symplectic") == false);
  CHECK(j.at("failed") == false);
  CHECK(count_lines(trajectory_csv(r, c.sample_every)) == 1 + 11);
}

TEST_CASE("harmonic diagnostics") {
  const RunConfig c =
      parse_run_config(R"({"system":"harmonic","n":1,"x0":[1,0],"dt":0.001,"steps":10000,"sample_every":100})");
  const auto j = nlohmann::json::parse(diagnostics_json(run_simulation(c)));
  CHECK(j.at("energy_drift").get<double>() <= 1e-9);
  CHECK(j.at("symplectic") == true);
}

TEST_CASE("csv keeps 17 significant digits") {
  const RunConfig c = parse_run_config(R"({"system":"harmonic","n":1,"dt":0.1,"steps":3,"sample_every":1})");
  const SimulationResult r = run_simulation(c);
  std::istringstream in(trajectory_csv(r, 1));
  std::string line;
  std::getline(in, line);
  for (std::size_t k = 0; std::getline(in, line); ++k) {
    const auto cells = parse_real_list(line);
    CHECK(cells[0] == r.diagnostics.trajectory.times[k]);
    CHECK(cells[1] == r.diagnostics.trajectory.states[k].q(0));
    CHECK(cells[2] == r.diagnostics.trajectory.states[k].p(0));
  }
}

TEST_CASE("blow-up gives a flagged partial run") {
  const RunConfig c = parse_run_config(
      R"({"system":{"name":"random-alpha","params":{"amplitude":1}},"n":2,"seed":4,"dt":0.001,"steps":10000,"sample_every":1000})");
  const SimulationResult r = run_simulation(c);
  CHECK(r.diagnostics.trajectory.failed);
  const auto j = nlohmann::json::parse(diagnostics_json(r));
  CHECK(j.at("failed") == true);
  CHECK(j.at("last_valid_index").get<std::size_t>() < 10000);
}

TEST_CASE("simulation output is byte-identical across runs") {
  const RunConfig c = parse_run_config(
      R"({"system":"random-alpha","n":3,"seed":9,"dt":0.01,"steps":200,"sample_every":10})");
  const SimulationResult a = run_simulation(c);
  const SimulationResult b = run_simulation(c);
  CHECK(trajectory_csv(a, 10) == trajectory_csv(b, 10));
  CHECK(diagnostics_json(a) == diagnostics_json(b));
}
