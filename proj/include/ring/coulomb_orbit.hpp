#pragma once

#include <utility>

#include "ring/potentials.hpp"
#include "ring/trajectory.hpp"

namespace ring {

/// Constants of a bounded trajectory in the Coulomb-plus-ring potential, in
/// spherical coordinates. The radial motion is a Kepler orbit with squared
/// angular momentum K; with true anomaly nu measured from pericentre,
///
///   cos theta(t) = cos theta0 cos(nu(t) - beta0)
///   phi(t)       = phi0 + m * integral dt / (r^2 sin^2 theta)
///
/// t0 is the pericentre passage nearest to the fitting time.
struct CoulombOrbit {
  CoulombParams params{1.0, 0.0};
  double E = 0;
  double K = 0;  // B1
  double m = 0;  // B2 = L_z
  double M_abs = 0;
  double r1 = 0;
  double r2 = 0;
  double theta0 = 0;  // sin theta0 = |M| / sqrt(K), 0 < theta0 <= pi/2
  double t0 = 0;
  double beta0 = 0;
  double phi0 = 0;

  double semi_major = 0;
  double eccentricity = 0;
  /// K = M^2: theta stays at pi/2 and the motion is in the xy-plane.
  bool equatorial = false;
  /// Q = 0 and m = 0: motion in the vertical plane at azimuth phi0, passing
  /// over the poles.
  bool polar = false;
};

/// (r1, r2) for energy E < 0 and K = B1.
std::pair<double, double> radial_turning_points(const CoulombParams& params, double E, double K);

/// Throws UnboundedOrbitError when H(pt) >= 0.
CoulombOrbit orbit_from_state(const CoulombParams& params, const PhasePointd& pt, double t);

/// Orbit from its constants; validates -Z^2/(2K) <= E < 0 and K >= M^2.
CoulombOrbit make_orbit(const CoulombParams& params, double E, double K, double m, double t0,
                        double beta0, double phi0);

/// T_C = 2 pi Z (-2E)^(-3/2).
double kepler_period(double charge, double energy);
double kepler_period(const CoulombOrbit& orbit);
double base_period(const CoulombOrbit& orbit);

/// Time at which the orbit passes radius r on the given radial half-cycle.
/// Half-cycle 0 ascends from the pericentre at t0 to the apocentre at
/// t0 + T_C/2, half-cycle 1 descends back, and so on (negative indices run
/// backwards). Throws DomainError for circular orbits or r outside [r1, r2].
double time_of_r(const CoulombOrbit& orbit, double r, long half_cycle);

/// Eccentric anomaly at time t, continuous in t (eta = 0 at t0).
double eccentric_anomaly(const CoulombOrbit& orbit, double t);

/// Solves eta - e sin eta = mean_anomaly by safeguarded Newton iteration on
/// a bracket of width pi. Continuous in mean_anomaly.
double solve_kepler(double mean_anomaly, double eccentricity);

double r_of_t(const CoulombOrbit& orbit, double t);

PhasePointd state_of_t(const CoulombOrbit& orbit, double t);

double azimuth_of_t(const CoulombOrbit& orbit, double t);
double polar_angle_of_t(const CoulombOrbit& orbit, double t);

/// The two-arcsin expression for phi as a function of theta, as usually
/// printed. Tracks azimuth_of_t up to an additive constant on half-cycles
/// where theta increases.
double arcsin_azimuth(const CoulombOrbit& orbit, double theta);

Trajectory sample(const CoulombOrbit& orbit, double t_begin, double t_end, std::size_t count);

}  // namespace ring
