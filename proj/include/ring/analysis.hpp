#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ring/coulomb_orbit.hpp"
#include "ring/oscillator_orbit.hpp"
#include "ring/rational.hpp"
#include "ring/trajectory.hpp"

namespace ring {

// ---------------------------------------------------------------------------
// Commensurability

enum class OrbitKind { periodic, quasi_periodic, unbounded };

std::string to_string(OrbitKind kind);

/// Outcome of the commensurability test |M| / |m| = k1 / k2.
///
/// For periodic orbits T = k1 * base_period. The m = 0 case is reported as
/// periodic with (k1, k2) = (1, 0) and planar = true. For quasi-periodic
/// orbits (k1, k2) is the best rational approximation within the denominator
/// limit and `error` its distance from the ratio.
struct PeriodicityVerdict {
  OrbitKind kind = OrbitKind::quasi_periodic;
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;
  double period = 0;
  double ratio = 0;
  double error = 0;
  bool planar = false;
  int m_sign = 0;
};

inline constexpr double kDefaultRatioTolerance = 1e-9;
inline constexpr std::int64_t kDefaultMaxDenominator = 1'000;

/// Depends only on (m, Q); `system` is carried for reporting and does not
/// change the verdict.
PeriodicityVerdict classify_periodicity(SystemKind system, double m, double ring,
                                        double base_period,
                                        double tol = kDefaultRatioTolerance,
                                        std::int64_t max_denominator = kDefaultMaxDenominator);

/// Classifies the orbit through pt; Coulomb states with E >= 0 are unbounded.
PeriodicityVerdict classify_state(const SystemParams& params, const PhasePointd& pt,
                                  double tol = kDefaultRatioTolerance,
                                  std::int64_t max_denominator = kDefaultMaxDenominator);

/// L_z value that makes |M| / m = k1 / k2: m = k2 sqrt(Q / (k1^2 - k2^2)).
double m_for_periodicity(std::int64_t k1, std::int64_t k2, double ring);

// ---------------------------------------------------------------------------
// Closure

/// Length and momentum units used to make phase-space distances dimensionless.
struct OrbitScale {
  double length = 1;
  double momentum = 1;
};

/// Oscillator: max(rho2, z0) and sqrt(2 H). Coulomb: r2 and sqrt(2 Z / r1).
OrbitScale orbit_scale(const OscillatorOrbit& orbit);
OrbitScale orbit_scale(const CoulombOrbit& orbit);

double phase_distance(const PhasePointd& a, const PhasePointd& b, const OrbitScale& scale);

double closure_distance(const OscillatorOrbit& orbit, double period, double t_ref);
double closure_distance(const CoulombOrbit& orbit, double period, double t_ref);

/// State at time t interpolated with cubic Hermite polynomials (positions
/// use the momenta as slopes, momenta use the force).
PhasePointd state_at(const Trajectory& traj, double t);

double closure_distance(const Trajectory& traj, double period, double t_ref,
                        const OrbitScale& scale);

// ---------------------------------------------------------------------------
// Envelopes

struct BoundsViolation {
  std::size_t index = 0;
  double t = 0;
  std::string quantity;
  double value = 0;
  double lower = 0;
  double upper = 0;
};

/// rho in [rho1, rho2] and |z| <= z0, each widened by slack.
std::vector<BoundsViolation> bounds_audit(const Trajectory& traj, const OscillatorOrbit& orbit,
                                          double slack);
/// r in [r1, r2] and theta in [theta0, pi - theta0], each widened by slack.
std::vector<BoundsViolation> bounds_audit(const Trajectory& traj, const CoulombOrbit& orbit,
                                          double slack);

// ---------------------------------------------------------------------------
// Planarity

struct PlanarityReport {
  bool planar = false;
  /// Unset for collinear (degenerate) sample sets.
  std::optional<Vec3d> normal;
  double max_distance = 0;
  double scale = 0;
  /// Largest |torsion| over interior samples where it is defined.
  double max_torsion = 0;
  std::vector<double> torsion;
};

/// Least-squares plane through the sampled positions; planar iff every
/// point lies within tol * max|q| of it. Torsion is estimated from
/// five-point differences on uniformly spaced samples.
PlanarityReport planarity(const Trajectory& traj, double tol);

}  // namespace ring
