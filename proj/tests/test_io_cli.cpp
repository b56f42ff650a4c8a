#include <doctest.h>

#include "ring/cli.hpp"
#include "ring/io.hpp"
#include "ring/analysis.hpp"
#include "ring/integrator.hpp"
#include "ring/oscillator_orbit.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace ring;
namespace fs = std::filesystem;

namespace {

KeyValueConfig parse(const std::string& text) {
  std::istringstream in(text);
  return KeyValueConfig::parse(in);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ring_dynamics_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ring-dynamics");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream sink, errors;
  auto* out = std::cout.rdbuf(sink.rdbuf());
  auto* err = std::cerr.rdbuf(errors.rdbuf());
  const int code = cli::run(int(argv.size()), argv.data());
  std::cout.rdbuf(out);
  std::cerr.rdbuf(err);
  return code;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("key value parsing") {
  const auto cfg = parse("# comment\nsystem = oscillator\n\nomega=1.5  # trailing\nm_values = 0, 1,2\n");
  CHECK(cfg.text("system") == "oscillator");
  CHECK(cfg.number("omega") == 1.5);
  CHECK(cfg.number("Q", 0.25) == 0.25);
  CHECK(cfg.numbers("m_values") == std::vector<double>{0, 1, 2});
  CHECK_THROWS_AS(cfg.number("Q"), ConfigError);
}

TEST_CASE("diagnostics carry line and field") {
  try {
    parse("system = oscillator\nomega = abc\n").number("omega");
    FAIL("expected error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.field() == "omega");
  }
  CHECK_THROWS_AS(parse("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(parse("a = 1\na = 2\n"), ConfigError);
  try {
    parse("system = coulomb\nZ = 1\ncolour = red\n").reject_unknown({"system", "Z"});
    FAIL("expected error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(e.field() == "colour");
  }
}

TEST_CASE("csv and json trajectories round trip") {
  const auto o = make_orbit(OscillatorParams(1, 2), 2.5, 0.3, 1, 0.2, 0.1, 0.4);
  const auto traj = sample(o, 0, 10, 41);
  std::stringstream csv;
  write_trajectory_csv(csv, traj);
  const std::string header = csv.str().substr(0, csv.str().find('\n'));
  CHECK(header == "t,x,y,z,px,py,pz,rho,phi_unwrapped,r,theta,I1,I2,I3,I4");
  const auto back = read_trajectory_csv(csv, o.params);
  REQUIRE(back.size() == traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(back[i].t == traj[i].t);
    CHECK(back[i].state.q == traj[i].state.q);
    CHECK(back[i].state.p == traj[i].state.p);
    CHECK(back[i].phi == traj[i].phi);
  }
  const auto j = trajectory_to_json(traj, 10);
  CHECK(j.size() == 5);
  const auto from_json = trajectory_from_json(nlohmann::json::parse(j.dump()), o.params);
  CHECK(from_json.back().t == traj.back().t);
  CHECK(from_json.back().state.q == traj.back().state.q);
}

TEST_CASE("reloaded numerical trajectory reproduces drift and bounds") {
  const auto o = make_orbit(OscillatorParams(1, 2), 2.5, 0.3, 1, 0.2, 0.1, 0.4);
  IntegratorConfig cfg;
  cfg.step = 0.05;
  const auto traj = integrate(o.params, state_of_t(o, 0), 0, 30, cfg);
  std::stringstream csv;
  write_trajectory_csv(csv, traj);
  const auto back = read_trajectory_csv(csv, o.params);
  CHECK(drift_report(back).max_relative == drift_report(traj).max_relative);
  CHECK(bounds_audit(back, o, 1e-9).size() == bounds_audit(traj, o, 1e-9).size());
}

TEST_CASE("stride keeps the final sample") {
  const auto o = make_orbit(OscillatorParams(1, 2), 2.5, 0.3, 1, 0.2, 0.1, 0.4);
  const auto traj = sample(o, 0, 10, 12);
  std::stringstream csv;
  write_trajectory_csv(csv, traj, 5);
  const auto back = read_trajectory_csv(csv, o.params);
  CHECK(back.size() == 4);
  CHECK(back.back().t == 10.0);
}

TEST_CASE("malformed csv is rejected") {
  std::stringstream bad("t,x\n1,2\n");
  CHECK_THROWS_AS(read_trajectory_csv(bad, OscillatorParams(1, 0)), ConfigError);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23})
    CHECK(std::stod(format_double(v)) == v);
}

}

TEST_SUITE("cli") {

TEST_CASE("scenario loading validates physics") {
  CHECK_THROWS_AS(cli::load_scenario(parse("system = coulomb\nZ = 1\nQ = 1\nx = 1\ny = 0\nz = 0\npx = 0\npy = 2\npz = 0\n")),
                  ConfigError);
  CHECK_THROWS_AS(cli::load_scenario(parse("system = oscillator\nomega = 1\nQ = 3\nE1 = 1.5\nE2 = 0\nm = 1\n")),
                  ConfigError);
  CHECK_THROWS_AS(cli::load_scenario(parse("system = oscillator\nomega = 1\nE1 = 2\nE2 = 0\nm = 1\nx = 1\n")),
                  ConfigError);
  CHECK_THROWS_AS(cli::load_scenario(parse("system = oscillator\nomega = 1\nZ = 1\nE1 = 2\nE2 = 0\nm = 1\n")),
                  ConfigError);
  CHECK_THROWS_AS(cli::load_scenario(parse("system = pendulum\n")), ConfigError);
  const auto sc = cli::load_scenario(parse("system = oscillator\nomega = 1\nQ = 3\nE1 = 3\nE2 = 0.4\nm = 1\n"));
  CHECK(sc.integrator.method == Method::rk4);
  CHECK(sc.integrator.step == doctest::Approx(2 * std::numbers::pi / 1e4));
}

TEST_CASE("simulate reports the commensurable period") {
  auto sc = cli::load_scenario(parse(
      "system = oscillator\nomega = 1\nQ = 3\nE1 = 3\nE2 = 0.4\nm = 1\nperiods = 2\nsteps_per_period = 2000\n"));
  const auto r = cli::simulate(sc);
  CHECK(r.summary["verdict"]["kind"] == "periodic");
  CHECK(r.summary["verdict"]["k1"] == 2);
  CHECK(r.summary["verdict"]["period"].get<double>() == doctest::Approx(4 * std::numbers::pi));
  CHECK(r.summary["closure"]["analytic"].get<double>() < 1e-8);
  CHECK(r.summary["closure"]["numeric"].get<double>() < 1e-6);
  CHECK(r.summary["bounds"]["numeric_violations"] == 0);
  CHECK(r.numeric.size() == r.analytic.size());
}

TEST_CASE("Kepler scenario closes after one period") {
  const auto sc = cli::load_scenario(parse(
      "system = coulomb\nZ = 1\nQ = 0\nx = 1\ny = 0\nz = 0.2\npx = 0\npy = 0.9\npz = 0.1\n"));
  const auto r = cli::simulate(sc);
  CHECK(r.summary["closure"]["numeric"].get<double>() < 1e-6);
}

TEST_CASE("sweep rows") {
  auto sc = cli::load_sweep(parse("system = oscillator\nomega = 1\nm_values = 0, 1\nQ_values = 1, 3\n"));
  const auto rows = cli::sweep(sc);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].verdict.planar);
  CHECK(rows[1].verdict.kind == OrbitKind::quasi_periodic);
  CHECK(rows[1].verdict.k1 == 1393);
  CHECK(rows[1].verdict.k2 == 985);
  CHECK(rows[3].verdict.k1 == 2);
  CHECK(rows[3].verdict.period == doctest::Approx(4 * std::numbers::pi));
}

TEST_CASE("verify passes on both systems") {
  for (const char* text : {"system = oscillator\nomega = 1\nQ = 2\ncount = 30\n",
                           "system = coulomb\nZ = 1\nQ = 2\ncount = 30\n"}) {
    const auto vc = cli::load_verify(parse(text));
    const auto report = cli::verify(vc);
    CHECK(report.all_passed());
    CHECK(report.points.size() == 30);
  }
}

TEST_CASE("random points are reproducible") {
  const auto a = cli::random_points(9, 10), b = cli::random_points(9, 10);
  for (int i = 0; i < 10; ++i) CHECK(a[i].q == b[i].q);
  CHECK(cli::random_points(10, 1)[0].q != a[0].q);
}

TEST_CASE("thread count from the environment") {
  setenv("RING_DYNAMICS_THREADS", "3", 1);
  CHECK(cli::thread_count() == 3);
  setenv("RING_DYNAMICS_THREADS", "zero", 1);
  CHECK(cli::thread_count() >= 1);
  unsetenv("RING_DYNAMICS_THREADS");
}

TEST_CASE("command line exit codes and outputs") {
  const fs::path dir = scratch("cli");
  {
    std::ofstream(dir / "osc.cfg") << "system = oscillator\nomega = 1\nQ = 3\nE1 = 3\nE2 = 0.4\nm = 1\n"
                                      "periods = 2\nsteps_per_period = 1000\noutput_stride = 50\n";
    std::ofstream(dir / "bad.cfg") << "system = oscillator\nomega = 1\nbogus = 2\n";
    std::ofstream(dir / "unbound.cfg") << "system = coulomb\nZ = 1\nx = 1\ny = 0\nz = 0\npx = 0\npy = 2\npz = 0\n";
    std::ofstream(dir / "axis.cfg") << "system = oscillator\nomega = 1\nQ = 1e-20\nx = 1\ny = 0\nz = 0\n"
                                       "px = 0\npy = 0\npz = 0\nstep = 0.000785398163397448\n";
    std::ofstream(dir / "sweep.cfg") << "system = coulomb\nZ = 1\nm_values = 1\nQ_values = 3\n";
    std::ofstream(dir / "an.cfg") << "system = oscillator\nomega = 1\nQ = 3\n";
  }
  const std::string out = (dir / "run").string();
  CHECK(run_cli({"simulate", "--config", (dir / "osc.cfg").string(), "--output", out}) == cli::kSuccess);
  CHECK(fs::exists(fs::path(out) / "numeric.csv"));
  CHECK(fs::exists(fs::path(out) / "analytic.csv"));
  CHECK(slurp(fs::path(out) / "summary.csv").find("verdict.kind,periodic") != std::string::npos);

  const std::string first = slurp(fs::path(out) / "numeric.csv");
  CHECK(run_cli({"simulate", "--config", (dir / "osc.cfg").string(), "--output", out}) == cli::kSuccess);
  CHECK(slurp(fs::path(out) / "numeric.csv") == first);

  CHECK(run_cli({"simulate", "--config", (dir / "osc.cfg").string(), "--output", out, "--format", "json"}) == cli::kSuccess);
  CHECK(nlohmann::json::parse(slurp(fs::path(out) / "summary.json"))["verdict"]["k1"] == 2);

  CHECK(run_cli({"analyze", "--config", (dir / "an.cfg").string(), "--trajectory",
                 (fs::path(out) / "numeric.json").string(), "--format", "json", "--output", out}) == cli::kSuccess);
  CHECK(fs::exists(fs::path(out) / "analysis.json"));

  CHECK(run_cli({"verify", "--system", "coulomb", "--seed", "5", "--output", out}) == cli::kSuccess);
  CHECK(fs::exists(fs::path(out) / "verify.csv"));
  CHECK(run_cli({"sweep", "--config", (dir / "sweep.cfg").string(), "--output", out}) == cli::kSuccess);
  CHECK(slurp(fs::path(out) / "sweep.csv").find("coulomb,3,1,periodic,2,1,") != std::string::npos);

  CHECK(run_cli({"verify", "--config", (dir / "bad.cfg").string()}) == cli::kValidationError);
  CHECK(run_cli({"simulate", "--config", (dir / "unbound.cfg").string(), "--output", out}) == cli::kValidationError);
  CHECK(run_cli({"simulate", "--config", (dir / "axis.cfg").string(), "--output", out}) == cli::kSingularityAbort);
  CHECK(run_cli({"simulate", "--config", (dir / "missing.cfg").string()}) == cli::kValidationError);
  CHECK(run_cli({"simulate", "--format", "xml"}) == cli::kValidationError);
  CHECK(run_cli({"verify", "--config", (dir / "an.cfg").string(), "--output", out}) == cli::kSuccess);
  fs::remove_all(dir);
}

}
