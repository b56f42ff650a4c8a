#pragma once

#include <utility>
#include <vector>

#include "ring/potentials.hpp"
#include "ring/trajectory.hpp"

namespace ring {

/// Constants of a closed-form trajectory in the oscillator-plus-ring
/// potential, in cylindrical coordinates:
///
///   rho^2(t) = (rho1^2 + rho2^2)/2 + (rho2^2 - rho1^2)/2 sin 2 Omega (t - t0)
///   z(t)     = z0 sin Omega (t - t0p)
///   phi(t)   = phi0 + m * integral dt / rho^2
///
/// t0 is an ascending crossing of the mean of rho^2.
struct OscillatorOrbit {
  OscillatorParams params{1.0, 0.0};
  double E1 = 0;     // transverse energy H - A2
  double E2 = 0;     // axial energy A2
  double m = 0;      // L_z
  double M_abs = 0;  // sqrt(m^2 + Q)
  double rho1 = 0;
  double rho2 = 0;
  double z0 = 0;
  double t0 = 0;
  double t0p = 0;
  double phi0 = 0;
  /// Q = 0 and m = 0: straight-line oscillation through the axis in the
  /// vertical plane at azimuth phi0; rho is signed along that plane.
  bool through_axis = false;
};

/// (rho1, rho2) for transverse energy E1 and L_z = m. Throws DomainError if
/// E1 < Omega sqrt(m^2 + Q) beyond rounding.
std::pair<double, double> turning_points(const OscillatorParams& params, double E1, double m);

/// Orbit whose closed form passes through pt at time t.
OscillatorOrbit orbit_from_state(const OscillatorParams& params, const PhasePointd& pt, double t);

/// Orbit from its constants; validates E1 >= Omega |M| and E2 >= 0.
OscillatorOrbit make_orbit(const OscillatorParams& params, double E1, double E2, double m,
                           double t0, double t0p, double phi0);

PhasePointd state_of_t(const OscillatorOrbit& orbit, double t);

/// Unwrapped azimuth at time t.
double azimuth_of_t(const OscillatorOrbit& orbit, double t);

/// The arcsin expression for phi(t) as usually printed. Valid (up to an
/// additive constant) only while cos 2 Omega (t - t0) > 0.
double arcsin_azimuth(const OscillatorOrbit& orbit, double t);

struct OscillatorPeriods {
  double T_rho;
  double T_z;
  double T_O;
};

OscillatorPeriods periods(const OscillatorOrbit& orbit);

/// Base period T_O = 2 pi / Omega.
double base_period(const OscillatorOrbit& orbit);

/// count evenly spaced samples on [t_begin, t_end].
Trajectory sample(const OscillatorOrbit& orbit, double t_begin, double t_end, std::size_t count);

}  // namespace ring
