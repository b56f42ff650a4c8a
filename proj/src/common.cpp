#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "ring/errors.hpp"
#include "ring/integrals.hpp"
#include "ring/potentials.hpp"
#include "ring/trajectory.hpp"

namespace ring {

UnboundedOrbitError::UnboundedOrbitError(double energy)
    : DomainError("unbounded motion: E = " + std::to_string(energy) +
                  " >= 0, trajectories are infinite"),
      energy_(energy) {}

std::string describe_position(double x, double y, double z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(x=%.6g, y=%.6g, z=%.6g)", x, y, z);
  return buf;
}

OscillatorParams::OscillatorParams(double omega_, double ring_) : omega(omega_), ring(ring_) {
  if (!(omega > 0) || !std::isfinite(omega))
    throw std::invalid_argument("oscillator: Omega must be positive and finite");
  if (!(ring >= 0) || !std::isfinite(ring))
    throw std::invalid_argument("oscillator: Q must be non-negative and finite");
}

CoulombParams::CoulombParams(double charge_, double ring_) : charge(charge_), ring(ring_) {
  if (!(charge > 0) || !std::isfinite(charge))
    throw std::invalid_argument("coulomb: Z must be positive and finite");
  if (!(ring >= 0) || !std::isfinite(ring))
    throw std::invalid_argument("coulomb: Q must be non-negative and finite");
}

std::string to_string(SystemKind kind) {
  return kind == SystemKind::oscillator ? "oscillator" : "coulomb";
}

std::string to_string(InvolutionSet set) {
  switch (set) {
    case InvolutionSet::oscillator_spherical: return "{H;A1;A3}";
    case InvolutionSet::oscillator_cylindrical: return "{H;A2;A3}";
    case InvolutionSet::oscillator_spheroidal_minus: return "{H;A1-2a^2(H-A2);A3}";
    case InvolutionSet::oscillator_spheroidal_plus: return "{H;A1+2a^2(H-A2);A3}";
    case InvolutionSet::oscillator_cartesian_limit: return "{H;X1;X2}";
    case InvolutionSet::oscillator_angular_limit: return "{H;L^2;Lz}";
    case InvolutionSet::coulomb_spherical: return "{H;B1;B2}";
    case InvolutionSet::coulomb_parabolic: return "{H;B2;B3}";
    case InvolutionSet::coulomb_angular_limit: return "{H;L^2;Lx^2+tau*Ly^2}";
    case InvolutionSet::coulomb_runge_limit: return "{H;Lz;Lx*py-Ly*px+Z*z/r}";
  }
  return "?";
}

SystemKind system_of(InvolutionSet set) {
  switch (set) {
    case InvolutionSet::coulomb_spherical:
    case InvolutionSet::coulomb_parabolic:
    case InvolutionSet::coulomb_angular_limit:
    case InvolutionSet::coulomb_runge_limit:
      return SystemKind::coulomb;
    default:
      return SystemKind::oscillator;
  }
}

bool requires_pure_limit(InvolutionSet set) {
  return set == InvolutionSet::oscillator_cartesian_limit ||
         set == InvolutionSet::oscillator_angular_limit ||
         set == InvolutionSet::coulomb_angular_limit || set == InvolutionSet::coulomb_runge_limit;
}

std::vector<InvolutionSet> involution_sets(const OscillatorParams& params) {
  std::vector<InvolutionSet> sets{InvolutionSet::oscillator_spherical,
                                  InvolutionSet::oscillator_cylindrical,
                                  InvolutionSet::oscillator_spheroidal_minus,
                                  InvolutionSet::oscillator_spheroidal_plus};
  if (params.ring == 0) {
    sets.push_back(InvolutionSet::oscillator_cartesian_limit);
    sets.push_back(InvolutionSet::oscillator_angular_limit);
  }
  return sets;
}

std::vector<InvolutionSet> involution_sets(const CoulombParams& params) {
  std::vector<InvolutionSet> sets{InvolutionSet::coulomb_spherical,
                                  InvolutionSet::coulomb_parabolic};
  if (params.ring == 0) {
    sets.push_back(InvolutionSet::coulomb_angular_limit);
    sets.push_back(InvolutionSet::coulomb_runge_limit);
  }
  return sets;
}

double unwrap_angle(double angle, double previous) {
  constexpr double two_pi = 2 * std::numbers::pi;
  return angle + two_pi * std::round((previous - angle) / two_pi);
}

void Trajectory::append(double t, const PhasePointd& state) {
  Sample s;
  s.t = t;
  s.state = state;
  const auto& q = state.q;
  s.rho = std::hypot(q.x(), q.y());
  s.z = q.z();
  s.r = q.norm();
  s.theta = std::atan2(s.rho, s.z);
  const double raw_phi = std::atan2(q.y(), q.x());
  s.phi = samples.empty() ? raw_phi : unwrap_angle(raw_phi, samples.back().phi);
  s.integrals = std::visit([&](const auto& p) { return integral_values(p, state); }, params);
  append_raw(s);
}

void Trajectory::append_raw(const Sample& sample) {
  if (!samples.empty() && !(sample.t > samples.back().t))
    throw std::invalid_argument("trajectory samples must have strictly increasing time");
  samples.push_back(sample);
}

}  // namespace ring
