#include "ring/coulomb_orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ring/integrals.hpp"

namespace ring {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

double mean_motion(const CoulombOrbit& o) {
  return std::pow(-2.0 * o.E, 1.5) / o.params.charge;
}

double cos_theta0(const CoulombOrbit& o) { return o.equatorial ? 0.0 : std::cos(o.theta0); }
double sin_theta0(const CoulombOrbit& o) { return o.equatorial ? 1.0 : std::sin(o.theta0); }

double true_anomaly(double eta, double e) {
  const double k = std::round(eta / kTwoPi);
  const double er = eta - k * kTwoPi;
  return 2.0 * std::atan2(std::sqrt(1 + e) * std::sin(0.5 * er),
                          std::sqrt(1 - e) * std::cos(0.5 * er)) +
         k * kTwoPi;
}

// Continuous atan(tan(chi) / s0); its chi-derivative is s0 / (1 - cos^2 theta0 cos^2 chi).
double libration_phase_integral(double s0, double chi) {
  const double k = std::round(chi / kPi);
  const double cr = chi - k * kPi;
  return std::atan2(std::sin(cr), s0 * std::cos(cr)) + k * kPi;
}

void finish_constants(CoulombOrbit& o) {
  const double Z = o.params.charge;
  o.M_abs = std::sqrt(o.m * o.m + o.params.ring);
  std::tie(o.r1, o.r2) = radial_turning_points(o.params, o.E, o.K);
  o.semi_major = Z / (-2.0 * o.E);
  o.eccentricity = (o.r2 - o.r1) / (o.r2 + o.r1);
  const double ratio = std::min(1.0, o.M_abs / std::sqrt(o.K));
  o.theta0 = std::asin(ratio);
  o.equatorial = o.equatorial || (o.K - o.M_abs * o.M_abs) <= 4 * std::numeric_limits<double>::epsilon() * o.K;
  if (o.equatorial) o.theta0 = kPi / 2;
  o.polar = o.params.ring == 0 && o.m == 0;
}

}  // namespace

std::pair<double, double> radial_turning_points(const CoulombParams& params, double E, double K) {
  if (!(E < 0)) throw UnboundedOrbitError(E);
  if (!(K > 0)) throw DomainError("coulomb orbit: K must be positive (radial collision orbit)");
  const double Z = params.charge;
  const double disc2 = Z * Z + 2.0 * E * K;
  if (disc2 < -1e-12 * Z * Z)
    throw DomainError("coulomb orbit: E = " + std::to_string(E) + " is below -Z^2/(2K)");
  const double disc = std::sqrt(std::max(0.0, disc2));
  const double r2 = (Z + disc) / (-2.0 * E);
  // r1 r2 = K / (-2E)
  const double r1 = K / (-2.0 * E * r2);
  return {r1, r2};
}

CoulombOrbit make_orbit(const CoulombParams& params, double E, double K, double m, double t0,
                        double beta0, double phi0) {
  CoulombOrbit o{params};
  o.E = E;
  o.K = K;
  o.m = m;
  const double M2 = m * m + params.ring;
  if (!(K >= M2 * (1 - 1e-12)))
    throw DomainError("coulomb orbit: K = " + std::to_string(K) + " is below M^2 = " +
                      std::to_string(M2));
  finish_constants(o);
  o.t0 = t0;
  o.beta0 = beta0;
  o.phi0 = phi0;
  return o;
}

CoulombOrbit orbit_from_state(const CoulombParams& params, const PhasePointd& pt, double t) {
  const auto ints = coulomb_integrals(params, pt);
  if (!(ints.H < 0)) throw UnboundedOrbitError(ints.H);

  CoulombOrbit o{params};
  o.E = ints.H;
  o.K = ints.B1;
  o.m = snapped_lz(pt);
  o.equatorial = pt.q.z() == 0 && pt.p.z() == 0 && params.ring > 0;
  finish_constants(o);

  const auto& q = pt.q;
  const auto& p = pt.p;
  const double Z = params.charge;
  const double a = o.semi_major;
  const double e = o.eccentricity;
  const double r = q.norm();
  const double rdot = q.dot(p) / r;

  const double eta = e > 0 ? std::atan2(r * rdot / std::sqrt(Z * a), 1.0 - r / a) : 0.0;
  o.t0 = t - (eta - e * std::sin(eta)) / mean_motion(o);
  const double nu = true_anomaly(eta, e);

  const double w = q.z() / r;
  const double wdot = (p.z() * r - q.z() * rdot) / (r * r);
  const double nudot = std::sqrt(o.K) / (r * r);
  const double chi = o.equatorial ? 0.0 : std::atan2(-wdot / nudot, w);
  o.beta0 = nu - chi;

  if (o.polar) {
    // Orient the plane so that the signed horizontal coordinate is r sin(chi).
    const double rho = std::hypot(q.x(), q.y());
    if (rho > 0) {
      o.phi0 = std::atan2(q.y(), q.x());
      if (std::sin(chi) < 0) o.phi0 += kPi;
    } else {
      o.phi0 = std::atan2(p.y(), p.x());
      if (std::cos(chi) < 0) o.phi0 += kPi;
    }
    return o;
  }

  o.phi0 = std::atan2(q.y(), q.x());
  if (o.m != 0) o.phi0 -= o.m / o.M_abs * libration_phase_integral(sin_theta0(o), chi);
  return o;
}

double kepler_period(double charge, double energy) {
  if (!(energy < 0)) throw UnboundedOrbitError(energy);
  return kTwoPi * charge * std::pow(-2.0 * energy, -1.5);
}

double kepler_period(const CoulombOrbit& orbit) { return kepler_period(orbit.params.charge, orbit.E); }
double base_period(const CoulombOrbit& orbit) { return kepler_period(orbit); }

double time_of_r(const CoulombOrbit& o, double r, long half_cycle) {
  if (!(o.r2 > o.r1)) throw DomainError("time_of_r: circular orbit, r is constant");
  const double span = o.r2 - o.r1;
  const double slack = 1e-12 * o.r2;
  if (!(r >= o.r1 - slack && r <= o.r2 + slack))
    throw DomainError("time_of_r: r = " + std::to_string(r) + " outside [r1, r2]");
  r = std::clamp(r, o.r1, o.r2);
  const double Z = o.params.charge;
  const double minus2E = -2.0 * o.E;
  const double T = kepler_period(o);
  const double root = std::sqrt((r - o.r1) * (o.r2 - r));
  const double arg = std::clamp((2.0 * r - o.r2 - o.r1) / span, -1.0, 1.0);
  // Printed form, offset so that the ascending branch starts at the pericentre.
  const double tau = -root / std::sqrt(minus2E) + Z * std::pow(minus2E, -1.5) * std::asin(arg) + T / 4;
  const long j = half_cycle >= 0 ? half_cycle / 2 : -((-half_cycle + 1) / 2);
  const bool ascending = half_cycle - 2 * j == 0;
  return ascending ? o.t0 + double(j) * T + tau : o.t0 + double(j + 1) * T - tau;
}

double solve_kepler(double mean_anomaly, double e) {
  if (!(e >= 0 && e < 1)) throw DomainError("solve_kepler: eccentricity must lie in [0, 1)");
  const double k = std::round(mean_anomaly / kTwoPi);
  const double mr = mean_anomaly - k * kTwoPi;
  const double target = std::abs(mr);
  // f(eta) = eta - e sin eta - target is increasing with f(0) <= 0 <= f(pi).
  double lo = 0.0, hi = kPi;
  double eta = std::min(kPi, target + e * std::sin(target) / std::max(1e-3, 1 - e * std::cos(target)));
  for (int it = 0; it < 100; ++it) {
    const double f = eta - e * std::sin(eta) - target;
    if (f == 0) break;
    if (f < 0) lo = eta; else hi = eta;
    const double fp = 1.0 - e * std::cos(eta);
    double next = eta - f / fp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - eta) <= 1e-16 * std::max(1.0, eta) || hi - lo <= 4e-16) {
      eta = next;
      break;
    }
    eta = next;
  }
  return (mr < 0 ? -eta : eta) + k * kTwoPi;
}

double eccentric_anomaly(const CoulombOrbit& o, double t) {
  return solve_kepler(mean_motion(o) * (t - o.t0), o.eccentricity);
}

double r_of_t(const CoulombOrbit& o, double t) {
  if (o.eccentricity == 0) return o.semi_major;
  const double eta = eccentric_anomaly(o, t);
  return std::clamp(o.semi_major * (1.0 - o.eccentricity * std::cos(eta)), o.r1, o.r2);
}

namespace {

struct PolarState {
  double r, rdot, chi, nudot;
};

PolarState polar_state(const CoulombOrbit& o, double t) {
  const double e = o.eccentricity;
  const double eta = eccentric_anomaly(o, t);
  const double ce = std::cos(eta);
  const double r = o.semi_major * (1.0 - e * ce);
  const double eta_dot = mean_motion(o) / (1.0 - e * ce);
  return {r, o.semi_major * e * std::sin(eta) * eta_dot, true_anomaly(eta, e) - o.beta0,
          std::sqrt(o.K) / (r * r)};
}

}  // namespace

double azimuth_of_t(const CoulombOrbit& o, double t) {
  if (o.m == 0) return o.phi0;
  const auto ps = polar_state(o, t);
  return o.phi0 + o.m / o.M_abs * libration_phase_integral(sin_theta0(o), ps.chi);
}

double polar_angle_of_t(const CoulombOrbit& o, double t) {
  const auto ps = polar_state(o, t);
  return std::acos(std::clamp(cos_theta0(o) * std::cos(ps.chi), -1.0, 1.0));
}

double arcsin_azimuth(const CoulombOrbit& o, double theta) {
  if (o.m == 0) return o.phi0;
  const double c0 = cos_theta0(o), s0 = sin_theta0(o);
  const double ct = std::cos(theta);
  const double first = std::clamp((-1.0 + s0 * s0 / (1.0 + ct)) / c0, -1.0, 1.0);
  const double second = std::clamp((-1.0 + s0 * s0 / (1.0 - ct)) / c0, -1.0, 1.0);
  return o.phi0 + 0.5 * o.m / o.M_abs * (std::asin(first) - std::asin(second));
}

PhasePointd state_of_t(const CoulombOrbit& o, double t) {
  const auto ps = polar_state(o, t);
  const double sc = std::sin(ps.chi), cc = std::cos(ps.chi);
  PhasePointd pt;

  if (o.polar) {
    const double ch = std::cos(o.phi0), sh = std::sin(o.phi0);
    const double hpos = ps.r * sc;
    const double hvel = ps.rdot * sc + ps.r * ps.nudot * cc;
    pt.q = {hpos * ch, hpos * sh, ps.r * cc};
    pt.p = {hvel * ch, hvel * sh, ps.rdot * cc - ps.r * ps.nudot * sc};
    return pt;
  }

  const double c0 = cos_theta0(o);
  const double w = c0 * cc;
  const double wdot = -c0 * sc * ps.nudot;
  const double st = std::sqrt(std::max(0.0, 1.0 - w * w));
  const double rho = ps.r * st;
  const double rho_dot = ps.rdot * st - ps.r * w * wdot / st;
  const double phi = o.m == 0 ? o.phi0
                              : o.phi0 + o.m / o.M_abs * libration_phase_integral(sin_theta0(o), ps.chi);
  const double phi_dot = o.m / (rho * rho);
  const double cp = std::cos(phi), sp = std::sin(phi);
  pt.q = {rho * cp, rho * sp, ps.r * w};
  pt.p = {rho_dot * cp - rho * phi_dot * sp, rho_dot * sp + rho * phi_dot * cp,
          ps.rdot * w + ps.r * wdot};
  return pt;
}

Trajectory sample(const CoulombOrbit& orbit, double t_begin, double t_end, std::size_t count) {
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
