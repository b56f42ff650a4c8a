#include "ring/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ring/integrals.hpp"

namespace ring {

std::string to_string(OrbitKind kind) {
  switch (kind) {
    case OrbitKind::periodic: return "periodic";
    case OrbitKind::quasi_periodic: return "quasi-periodic";
    case OrbitKind::unbounded: return "unbounded";
  }
  return "?";
}

PeriodicityVerdict classify_periodicity(SystemKind, double m, double ring, double base_period,
                                        double tol, std::int64_t max_denominator) {
  if (!(ring >= 0)) throw std::invalid_argument("classify_periodicity: Q must be >= 0");
  if (!(base_period > 0) || !std::isfinite(base_period))
    throw std::invalid_argument("classify_periodicity: base period must be positive");
  if (!(tol >= 0)) throw std::invalid_argument("classify_periodicity: tol must be >= 0");

  PeriodicityVerdict v;
  v.m_sign = (m > 0) - (m < 0);
  if (m == 0) {
    v.kind = OrbitKind::periodic;
    v.k1 = 1;
    v.k2 = 0;
    v.period = base_period;
    v.ratio = std::numeric_limits<double>::infinity();
    v.planar = true;
    return v;
  }

  v.ratio = std::sqrt(m * m + ring) / std::abs(m);
  for (const Fraction& f : convergents(v.ratio, max_denominator)) {
    const double err = std::abs(v.ratio - f.value());
    if (err <= tol) {
      v.kind = OrbitKind::periodic;
      v.k1 = f.num;
      v.k2 = f.den;
      v.error = err;
      v.period = double(f.num) * base_period;
      return v;
    }
  }
  const Fraction best = best_rational(v.ratio, max_denominator);
  v.kind = OrbitKind::quasi_periodic;
  v.k1 = best.num;
  v.k2 = best.den;
  v.error = std::abs(v.ratio - best.value());
  return v;
}

PeriodicityVerdict classify_state(const SystemParams& params, const PhasePointd& pt, double tol,
                                  std::int64_t max_denominator) {
  if (const auto* osc = std::get_if<OscillatorParams>(&params)) {
    const double m = snapped_lz(pt);
    return classify_periodicity(SystemKind::oscillator, m, osc->ring,
                                2 * std::numbers::pi / osc->omega, tol, max_denominator);
  }
  const auto& cp = std::get<CoulombParams>(params);
  const auto ints = coulomb_integrals(cp, pt);
  if (!(ints.H < 0)) {
    PeriodicityVerdict v;
    v.kind = OrbitKind::unbounded;
    v.m_sign = (ints.B2 > 0) - (ints.B2 < 0);
    return v;
  }
  return classify_periodicity(SystemKind::coulomb, snapped_lz(pt), cp.ring,
                              kepler_period(cp.charge, ints.H), tol, max_denominator);
}

double m_for_periodicity(std::int64_t k1, std::int64_t k2, double ring) {
  if (k2 < 1 || k1 < 1) throw std::invalid_argument("m_for_periodicity: k1, k2 must be >= 1");
  if (gcd(k1, k2) != 1) throw std::invalid_argument("m_for_periodicity: k1 and k2 must be coprime");
  if (k1 == k2) throw DomainError("m_for_periodicity: k1 = k2 has no finite solution for Q > 0");
  if (k1 < k2) throw std::invalid_argument("m_for_periodicity: need k1 > k2 since |M| >= |m|");
  if (!(ring > 0)) throw DomainError("m_for_periodicity: Q must be positive");
  const double diff = double(k1 - k2) * double(k1 + k2);
  return double(k2) * std::sqrt(ring / diff);
}

OrbitScale orbit_scale(const OscillatorOrbit& orbit) {
  return {std::max(orbit.rho2, orbit.z0), std::sqrt(2.0 * (orbit.E1 + orbit.E2))};
}

OrbitScale orbit_scale(const CoulombOrbit& orbit) {
  return {orbit.r2, std::sqrt(2.0 * orbit.params.charge / orbit.r1)};
}

double phase_distance(const PhasePointd& a, const PhasePointd& b, const OrbitScale& scale) {
  const double dq = (a.q - b.q).norm() / scale.length;
  const double dp = (a.p - b.p).norm() / scale.momentum;
  return std::hypot(dq, dp);
}

double closure_distance(const OscillatorOrbit& orbit, double period, double t_ref) {
  if (period == 0) return 0;
  return phase_distance(state_of_t(orbit, t_ref), state_of_t(orbit, t_ref + period),
                        orbit_scale(orbit));
}

double closure_distance(const CoulombOrbit& orbit, double period, double t_ref) {
  if (period == 0) return 0;
  return phase_distance(state_of_t(orbit, t_ref), state_of_t(orbit, t_ref + period),
                        orbit_scale(orbit));
}

PhasePointd state_at(const Trajectory& traj, double t) {
  if (traj.empty()) throw std::invalid_argument("state_at: empty trajectory");
  const double t_lo = traj.front().t, t_hi = traj.back().t;
  const double slack = 1e-12 * std::max(1.0, std::abs(t_hi - t_lo));
  if (t < t_lo - slack || t > t_hi + slack)
    throw std::invalid_argument("state_at: t = " + std::to_string(t) + " outside the trajectory");
  const auto it = std::upper_bound(traj.samples.begin(), traj.samples.end(), t,
                                   [](double value, const Sample& s) { return value < s.t; });
  if (it == traj.samples.begin()) return traj.front().state;
  if (it == traj.samples.end()) return traj.back().state;
  const Sample& a = *(it - 1);
  const Sample& b = *it;
  if (t == a.t) return a.state;

  const Vec3d fa = std::visit([&](const auto& p) { return Vec3d(-potential_gradient(p, a.state.q)); },
                              traj.params);
  const Vec3d fb = std::visit([&](const auto& p) { return Vec3d(-potential_gradient(p, b.state.q)); },
                              traj.params);
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return PhasePointd(h00 * a.state.q + h10 * h * a.state.p + h01 * b.state.q + h11 * h * b.state.p,
                     h00 * a.state.p + h10 * h * fa + h01 * b.state.p + h11 * h * fb);
}

double closure_distance(const Trajectory& traj, double period, double t_ref,
                        const OrbitScale& scale) {
  if (period == 0) return 0;
  return phase_distance(state_at(traj, t_ref), state_at(traj, t_ref + period), scale);
}

namespace {

void check_range(std::vector<BoundsViolation>& out, const Sample& s, std::size_t index,
                 const char* name, double value, double lower, double upper, double slack) {
  if (value < lower - slack || value > upper + slack)
    out.push_back({index, s.t, name, value, lower, upper});
}

}  // namespace

std::vector<BoundsViolation> bounds_audit(const Trajectory& traj, const OscillatorOrbit& orbit,
                                          double slack) {
  std::vector<BoundsViolation> out;
  // Through-axis orbits reach rho = 0, which is their inner bound.
  const double inner = orbit.through_axis ? 0.0 : orbit.rho1;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Sample& s = traj[i];
    check_range(out, s, i, "rho", s.rho, inner, orbit.rho2, slack);
    check_range(out, s, i, "z", s.z, -orbit.z0, orbit.z0, slack);
  }
  return out;
}

std::vector<BoundsViolation> bounds_audit(const Trajectory& traj, const CoulombOrbit& orbit,
                                          double slack) {
  std::vector<BoundsViolation> out;
  const double theta_lo = orbit.polar ? 0.0 : orbit.theta0;
  const double theta_hi = std::numbers::pi - theta_lo;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Sample& s = traj[i];
    check_range(out, s, i, "r", s.r, orbit.r1, orbit.r2, slack);
    check_range(out, s, i, "theta", s.theta, theta_lo, theta_hi, slack);
  }
  return out;
}

PlanarityReport planarity(const Trajectory& traj, double tol) {
  const std::size_t n = traj.size();
  if (n < 4) throw std::invalid_argument("planarity: need at least 4 samples");
  PlanarityReport report;

  Vec3d centroid = Vec3d::Zero();
  for (const auto& s : traj.samples) {
    centroid += s.state.q;
    report.scale = std::max(report.scale, s.state.q.norm());
  }
  centroid /= double(n);
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& s : traj.samples) {
    const Vec3d d = s.state.q - centroid;
    scatter += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  const Eigen::Vector3d lambda = eig.eigenvalues();  // ascending
  const double floor = std::numeric_limits<double>::epsilon();
  if (lambda[2] <= 0 || lambda[1] <= floor * floor * lambda[2]) {
    report.planar = true;  // collinear or a single point
  } else {
    const Vec3d normal = eig.eigenvectors().col(0);
    report.normal = normal;
    for (const auto& s : traj.samples)
      report.max_distance = std::max(report.max_distance, std::abs(normal.dot(s.state.q - centroid)));
    report.planar = report.max_distance < tol * report.scale;
  }

  // Torsion tau = (r' x r'') . r''' / |r' x r''|^2 from five-point stencils.
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double h = traj[i + 1].t - traj[i].t;
    bool uniform = true;
    for (std::size_t j = i - 2; j < i + 2; ++j)
      uniform = uniform && std::abs((traj[j + 1].t - traj[j].t) - h) <= 1e-9 * h;
    if (!uniform) continue;
    const Vec3d& fm2 = traj[i - 2].state.q;
    const Vec3d& fm1 = traj[i - 1].state.q;
    const Vec3d& f0 = traj[i].state.q;
    const Vec3d& fp1 = traj[i + 1].state.q;
    const Vec3d& fp2 = traj[i + 2].state.q;
    const Vec3d d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
    const Vec3d d2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
    const Vec3d d3 = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h * h * h);
    const Vec3d b = d1.cross(d2);
    const double b2 = b.squaredNorm();
    if (b2 <= 1e-20 * std::pow(d1.squaredNorm(), 3) / std::max(report.scale * report.scale, 1e-300))
      continue;
    const double tau = b.dot(d3) / b2;
    report.torsion.push_back(tau);
    report.max_torsion = std::max(report.max_torsion, std::abs(tau));
  }
  return report;
}

}  // namespace ring
