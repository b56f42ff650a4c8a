#pragma once

#include <array>
#include <vector>

#include "ring/phase.hpp"
#include "ring/potentials.hpp"

namespace ring {

/// One time sample with cached cylindrical/spherical coordinates and the
/// four integrals (H, A1, A2, A3) or (H, B1, B2, B3).
struct Sample {
  double t = 0;
  PhasePointd state;
  double rho = 0;
  double phi = 0;  // unwrapped, continuous across samples
  double z = 0;
  double r = 0;
  double theta = 0;
  std::array<double, 4> integrals{};
};

struct Trajectory {
  SystemParams params;
  std::vector<Sample> samples;

  explicit Trajectory(SystemParams p) : params(p) {}

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  const Sample& operator[](std::size_t i) const { return samples[i]; }
  const Sample& front() const { return samples.front(); }
  const Sample& back() const { return samples.back(); }

  /// Appends a state at time t > back().t. The azimuth is unwrapped against
  /// the previous sample and the integral columns are evaluated from params.
  void append(double t, const PhasePointd& state);

  /// Appends a fully specified sample (e.g. one read back from disk). Only
  /// the time ordering is checked.
  void append_raw(const Sample& sample);
};

/// Continuous azimuth: the representative of atan2(y, x) closest to previous.
double unwrap_angle(double angle, double previous);

}  // namespace ring
