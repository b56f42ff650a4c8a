#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "ring/potentials.hpp"
#include "ring/trajectory.hpp"

namespace ring {

enum class Method { leapfrog, rk4 };

std::string to_string(Method method);
Method parse_method(const std::string& text);

struct IntegratorConfig {
  Method method = Method::leapfrog;
  double step = 1e-3;
  double axis_epsilon = 1e-8;
  long max_steps = 50'000'000;

  void validate() const;
};

/// The integration came within axis_epsilon of the z-axis (or of the origin
/// for the Coulomb term).
class SingularityError : public std::runtime_error {
 public:
  SingularityError(double time, const PhasePointd& last_good);
  double time() const { return time_; }
  const PhasePointd& last_good() const { return last_good_; }

 private:
  double time_;
  PhasePointd last_good_;
};

/// Fixed-step integration of Hamilton's equations from t_begin to t_end,
/// one sample per step (the final step is shortened to land on t_end).
Trajectory integrate(const OscillatorParams& params, const PhasePointd& start, double t_begin,
                     double t_end, const IntegratorConfig& config);
Trajectory integrate(const CoulombParams& params, const PhasePointd& start, double t_begin,
                     double t_end, const IntegratorConfig& config);
Trajectory integrate(const SystemParams& params, const PhasePointd& start, double t_begin,
                     double t_end, const IntegratorConfig& config);

/// Final state only; no trajectory is stored.
PhasePointd propagate(const SystemParams& params, const PhasePointd& start, double duration,
                      const IntegratorConfig& config);

/// Integrals with |I(0)| at or below this are compared in absolute terms.
inline constexpr double kVanishingIntegral = 1e-8;

struct DriftReport {
  /// max_t |I(t) - I(0)| / |I(0)| for (H, I1, I2, I3); absolute when I(0) vanishes.
  std::array<double, 4> max_relative{};
  std::array<std::string, 4> names{};

  double worst() const;
};

/// Integrals are re-evaluated from the stored states.
DriftReport drift_report(const Trajectory& traj);

/// Least-squares line through (t, H(t) - H(0)).
struct EnergyTrend {
  double slope = 0;
  double residual_rms = 0;
  double duration = 0;
  /// |slope| * duration: the net change explained by a linear trend.
  double secular_change() const;
  /// The trend over the whole run is smaller than the fluctuation level.
  bool consistent_with_zero() const { return secular_change() <= residual_rms; }
};

EnergyTrend energy_trend(const Trajectory& traj);

}  // namespace ring
