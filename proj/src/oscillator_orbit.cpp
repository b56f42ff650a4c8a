#include "ring/oscillator_orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ring/integrals.hpp"

namespace ring {
namespace {

constexpr double kPi = std::numbers::pi;

// Continuous antiderivative of 1/(a + b sin theta) scaled by c/2, with
// c = sqrt(a^2 - b^2):  atan((a tan(theta/2) + b) / c) continued across the
// poles of tan.
double radial_phase_integral(double a, double b, double c, double theta) {
  const double psi = 0.5 * theta;
  const double k = std::round(psi / kPi);
  const double psr = psi - k * kPi;
  return std::atan2(a * std::sin(psr) + b * std::cos(psr), c * std::cos(psr)) + k * kPi;
}

double mean_u(const OscillatorOrbit& o) { return 0.5 * (o.rho1 * o.rho1 + o.rho2 * o.rho2); }
double amp_u(const OscillatorOrbit& o) { return 0.5 * (o.rho2 - o.rho1) * (o.rho2 + o.rho1); }

}  // namespace

std::pair<double, double> turning_points(const OscillatorParams& params, double E1, double m) {
  const double w = params.omega;
  const double M2 = m * m + params.ring;
  const double floor = w * std::sqrt(M2);
  if (!(E1 >= floor * (1 - 1e-12)))
    throw DomainError("turning_points: E1 = " + std::to_string(E1) +
                      " is below the circular minimum Omega |M| = " + std::to_string(floor));
  const double disc = std::sqrt(std::max(0.0, (E1 - floor) * (E1 + floor)));
  const double outer2 = (E1 + disc) / (w * w);
  // rho1^2 rho2^2 = M^2 / Omega^2 avoids cancellation in E1 - disc.
  const double inner2 = outer2 > 0 ? M2 / (w * w * outer2) : 0.0;
  return {std::sqrt(inner2), std::sqrt(outer2)};
}

OscillatorOrbit make_orbit(const OscillatorParams& params, double E1, double E2, double m,
                           double t0, double t0p, double phi0) {
  if (!(E2 >= 0)) throw DomainError("oscillator orbit: E2 must be non-negative");
  OscillatorOrbit o{params};
  o.E1 = E1;
  o.E2 = E2;
  o.m = m;
  o.M_abs = std::sqrt(m * m + params.ring);
  std::tie(o.rho1, o.rho2) = turning_points(params, E1, m);
  o.z0 = std::sqrt(2.0 * E2) / params.omega;
  o.t0 = t0;
  o.t0p = t0p;
  o.phi0 = phi0;
  o.through_axis = params.ring == 0 && m == 0;
  return o;
}

OscillatorOrbit orbit_from_state(const OscillatorParams& params, const PhasePointd& pt, double t) {
  const auto ints = oscillator_integrals(params, pt);
  const double w = params.omega;
  const double E2 = ints.A2;
  const double E1 = std::max(ints.H - ints.A2, 0.0);
  OscillatorOrbit o = make_orbit(params, E1, E2, snapped_lz(pt), t, t, 0.0);

  const auto& q = pt.q;
  const auto& p = pt.p;
  if (o.z0 > 0) o.t0p = t - std::atan2(q.z(), p.z() / w) / w;

  const double rho = std::hypot(q.x(), q.y());
  if (o.through_axis) {
    // Signed radius s(t) = rho2 sin(Omega (t - t0) + pi/4) along azimuth phi0.
    double s = rho, sdot = 0.0;
    if (rho > 0) {
      o.phi0 = std::atan2(q.y(), q.x());
      sdot = (q.x() * p.x() + q.y() * p.y()) / rho;
    } else if (p.x() != 0 || p.y() != 0) {
      o.phi0 = std::atan2(p.y(), p.x());
      sdot = std::hypot(p.x(), p.y());
    }
    if (o.rho2 > 0) o.t0 = t - (std::atan2(s, sdot / w) - kPi / 4) / w;
    return o;
  }

  const double u = rho * rho;
  const double udot = 2.0 * (q.x() * p.x() + q.y() * p.y());
  const double b = amp_u(o);
  double theta = 0.0;
  if (b > 0) {
    theta = std::atan2(u - mean_u(o), udot / (2.0 * w));
    o.t0 = t - theta / (2.0 * w);
  }
  o.phi0 = std::atan2(q.y(), q.x());
  if (o.m != 0) {
    const double c = o.M_abs / w;
    o.phi0 -= o.m / o.M_abs * radial_phase_integral(mean_u(o), b, c, theta);
  }
  return o;
}

double azimuth_of_t(const OscillatorOrbit& o, double t) {
  if (o.m == 0) return o.phi0;
  const double w = o.params.omega;
  const double theta = 2.0 * w * (t - o.t0);
  return o.phi0 + o.m / o.M_abs * radial_phase_integral(mean_u(o), amp_u(o), o.M_abs / w, theta);
}

double arcsin_azimuth(const OscillatorOrbit& o, double t) {
  if (o.m == 0) return o.phi0;
  const double s = std::sin(2.0 * o.params.omega * (t - o.t0));
  const double r1 = o.rho1 * o.rho1, r2 = o.rho2 * o.rho2;
  const double arg = ((r2 + r1) * s - r1 + r2) / ((r2 - r1) * s + r1 + r2);
  return o.phi0 + 0.5 * o.m / o.M_abs * std::asin(std::clamp(arg, -1.0, 1.0));
}

PhasePointd state_of_t(const OscillatorOrbit& o, double t) {
  const double w = o.params.omega;
  PhasePointd pt;

  const double axial = w * (t - o.t0p);
  pt.q.z() = o.z0 * std::sin(axial);
  pt.p.z() = o.z0 * w * std::cos(axial);

  if (o.through_axis) {
    const double ph = w * (t - o.t0) + kPi / 4;
    const double s = o.rho2 * std::sin(ph);
    const double sdot = o.rho2 * w * std::cos(ph);
    const double c = std::cos(o.phi0), sn = std::sin(o.phi0);
    pt.q.x() = s * c;
    pt.q.y() = s * sn;
    pt.p.x() = sdot * c;
    pt.p.y() = sdot * sn;
    return pt;
  }

  const double theta = 2.0 * w * (t - o.t0);
  const double b = amp_u(o);
  const double u = mean_u(o) + b * std::sin(theta);
  const double udot = 2.0 * w * b * std::cos(theta);
  const double rho = std::sqrt(u);
  const double rho_dot = udot / (2.0 * rho);
  const double phi = azimuth_of_t(o, t);
  const double phi_dot = o.m / u;
  const double c = std::cos(phi), sn = std::sin(phi);
  pt.q.x() = rho * c;
  pt.q.y() = rho * sn;
  pt.p.x() = rho_dot * c - rho * phi_dot * sn;
  pt.p.y() = rho_dot * sn + rho * phi_dot * c;
  return pt;
}

OscillatorPeriods periods(const OscillatorOrbit& orbit) {
  const double T = 2 * kPi / orbit.params.omega;
  return {T / 2, T, T};
}

double base_period(const OscillatorOrbit& orbit) { return periods(orbit).T_O; }

Trajectory sample(const OscillatorOrbit& orbit, double t_begin, double t_end, std::size_t count) {
  if (count < 2 || !(t_end > t_begin))
    throw std::invalid_argument("sample: need count >= 2 and t_end > t_begin");
  Trajectory traj(orbit.params);
  traj.samples.reserve(count);
  const double dt = (t_end - t_begin) / double(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = i + 1 == count ? t_end : t_begin + dt * double(i);
    traj.append(t, state_of_t(orbit, t));
  }
  return traj;
}

}  // namespace ring
