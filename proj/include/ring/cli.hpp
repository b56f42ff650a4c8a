#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ring/analysis.hpp"
#include "ring/integrals.hpp"
#include "ring/integrator.hpp"
#include "ring/io.hpp"

namespace ring::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationError = 1,
  kCheckFailure = 2,
  kSingularityAbort = 3,
};

enum class Format { csv, json };

/// Worker count: RING_DYNAMICS_THREADS when set to a positive integer,
/// otherwise the hardware concurrency.
unsigned thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// system, omega (oscillator) or Z (coulomb), Q.
SystemParams load_params(const KeyValueConfig& cfg);

using AnyOrbit = std::variant<OscillatorOrbit, CoulombOrbit>;

struct ScenarioConfig {
  SystemParams params = OscillatorParams(1.0, 0.0);
  AnyOrbit orbit;
  PhasePointd start;
  double periods = 1.0;
  IntegratorConfig integrator;
  std::size_t output_stride = 1;
  double tol = kDefaultRatioTolerance;
  std::int64_t max_denominator = kDefaultMaxDenominator;
  double bounds_slack = 1e-6;
};

/// Validates the scenario, including the physical constraints on the
/// initial condition; throws ConfigError.
ScenarioConfig load_scenario(const KeyValueConfig& cfg);

struct SimulationResult {
  Trajectory analytic;
  Trajectory numeric;
  nlohmann::ordered_json summary;
};

/// Throws SingularityError when the integration hits the axis.
SimulationResult simulate(const ScenarioConfig& scenario);

struct VerifyConfig {
  SystemParams params = OscillatorParams(1.0, 1.0);
  std::size_t count = 100;
  std::uint64_t seed = 1;
  InvolutionOptions options;
  double involution_tol = 1e-8;
  double gradient_tol = 1e-6;
};

VerifyConfig load_verify(const KeyValueConfig& cfg);

struct VerifyCheck {
  std::size_t point = 0;
  std::string check;
  double value = 0;
  double threshold = 0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<PhasePointd> points;
  std::vector<VerifyCheck> checks;
  bool all_passed() const;
};

/// Random phase points off the axis, |q| in a box of half-width 1.5 with
/// rho >= 0.3, momenta in [-1, 1]^3. Depends only on the seed.
std::vector<PhasePointd> random_points(std::uint64_t seed, std::size_t count);

VerifyReport verify(const VerifyConfig& config);

struct SweepConfig {
  SystemKind system = SystemKind::oscillator;
  /// Omega for the oscillator, Z for the Coulomb system.
  double strength = 1.0;
  /// Energy used for the Kepler period.
  double energy = -0.5;
  std::vector<double> m_values;
  std::vector<double> ring_values;
  double tol = kDefaultRatioTolerance;
  std::int64_t max_denominator = kDefaultMaxDenominator;
};

SweepConfig load_sweep(const KeyValueConfig& cfg);

struct SweepRow {
  double ring = 0;
  double m = 0;
  PeriodicityVerdict verdict;
};

/// Rows ordered by Q, then m, in the order given.
std::vector<SweepRow> sweep(const SweepConfig& config);

struct AnalyzeConfig {
  SystemParams params = OscillatorParams(1.0, 0.0);
  std::string trajectory_path;
  std::optional<double> closure_period;
  double t_ref = 0;
  double planarity_tol = 1e-8;
  double bounds_slack = 1e-6;
};

AnalyzeConfig load_analyze(const KeyValueConfig& cfg);

nlohmann::ordered_json analyze(const Trajectory& traj, const AnalyzeConfig& config);

/// Flattens nested objects into dotted `key,value` CSV lines.
std::string json_to_csv(const nlohmann::ordered_json& doc);

int run(int argc, char** argv);

}  // namespace ring::cli
