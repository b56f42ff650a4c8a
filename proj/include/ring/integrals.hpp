#pragma once

#include <Eigen/SVD>

#include <array>
#include <string>
#include <vector>

#include "ring/potentials.hpp"

namespace ring {

template <typename Scalar>
struct OscillatorIntegrals {
  Scalar H, A1, A2, A3;
};

template <typename Scalar>
struct CoulombIntegrals {
  Scalar H, B1, B2, B3;
};

// Building blocks, each with its exact gradient.

template <typename Scalar>
Graded<Scalar> graded_lx(const PhasePoint<Scalar>& pt) {
  const auto& q = pt.q;
  const auto& p = pt.p;
  Graded<Scalar> g;
  g.value = q.y() * p.z() - q.z() * p.y();
  g.grad << 0, p.z(), -p.y(), 0, -q.z(), q.y();
  return g;
}

template <typename Scalar>
Graded<Scalar> graded_ly(const PhasePoint<Scalar>& pt) {
  const auto& q = pt.q;
  const auto& p = pt.p;
  Graded<Scalar> g;
  g.value = q.z() * p.x() - q.x() * p.z();
  g.grad << -p.z(), 0, p.x(), q.z(), 0, -q.x();
  return g;
}

template <typename Scalar>
Graded<Scalar> graded_lz(const PhasePoint<Scalar>& pt) {
  const auto& q = pt.q;
  const auto& p = pt.p;
  Graded<Scalar> g;
  g.value = q.x() * p.y() - q.y() * p.x();
  g.grad << p.y(), -p.x(), 0, -q.y(), q.x(), 0;
  return g;
}

/// |L|^2 = |q|^2 |p|^2 - (q.p)^2.
template <typename Scalar>
Graded<Scalar> graded_l2(const PhasePoint<Scalar>& pt) {
  const Scalar qq = pt.q.squaredNorm();
  const Scalar pp = pt.p.squaredNorm();
  const Scalar qp = pt.q.dot(pt.p);
  Graded<Scalar> g;
  g.value = qq * pp - qp * qp;
  g.grad << Scalar(2) * (pp * pt.q - qp * pt.p), Scalar(2) * (qq * pt.p - qp * pt.q);
  return g;
}

/// Q / sin^2(theta) = Q (1 + z^2/rho^2); the angular part of the ring barrier.
template <typename Scalar>
Graded<Scalar> graded_ring_angular(double ring, const PhasePoint<Scalar>& pt) {
  Graded<Scalar> g;
  if (ring == 0) return g;
  const Scalar rho2 = detail::checked_rho2(ring, pt.q, "ring integral");
  const Scalar Q = Scalar(ring);
  const Scalar z = pt.q.z();
  g.value = Q * (Scalar(1) + z * z / rho2);
  const Scalar c = -Scalar(2) * Q * z * z / (rho2 * rho2);
  g.grad << c * pt.q.x(), c * pt.q.y(), Scalar(2) * Q * z / rho2, 0, 0, 0;
  return g;
}

template <typename Scalar>
Graded<Scalar> operator+(Graded<Scalar> a, const Graded<Scalar>& b) {
  a.value += b.value;
  a.grad += b.grad;
  return a;
}

template <typename Scalar>
Graded<Scalar> operator-(Graded<Scalar> a, const Graded<Scalar>& b) {
  a.value -= b.value;
  a.grad -= b.grad;
  return a;
}

template <typename Scalar>
Graded<Scalar> operator*(Scalar s, Graded<Scalar> a) {
  a.value *= s;
  a.grad *= s;
  return a;
}

template <typename Scalar>
Graded<Scalar> square(const Graded<Scalar>& a) {
  return {a.value * a.value, Scalar(2) * a.value * a.grad};
}

/// A1 = L^2 + Q (1 + z^2/rho^2). Identical in form to B1 = L^2 + Q/sin^2(theta).
template <typename Scalar>
Graded<Scalar> graded_total_angular(double ring, const PhasePoint<Scalar>& pt) {
  return graded_l2(pt) + graded_ring_angular(ring, pt);
}

/// A2 = (p_z^2 + Omega^2 z^2) / 2.
template <typename Scalar>
Graded<Scalar> graded_axial_energy(const OscillatorParams& params, const PhasePoint<Scalar>& pt) {
  const Scalar w2 = Scalar(params.omega) * Scalar(params.omega);
  Graded<Scalar> g;
  g.value = Scalar(0.5) * (pt.p.z() * pt.p.z() + w2 * pt.q.z() * pt.q.z());
  g.grad << 0, 0, w2 * pt.q.z(), 0, 0, pt.p.z();
  return g;
}

/// One Cartesian oscillator energy, (p_i^2 + Omega^2 q_i^2) / 2.
template <typename Scalar>
Graded<Scalar> graded_cartesian_energy(const OscillatorParams& params, const PhasePoint<Scalar>& pt,
                                       int axis) {
  const Scalar w2 = Scalar(params.omega) * Scalar(params.omega);
  Graded<Scalar> g;
  g.value = Scalar(0.5) * (pt.p[axis] * pt.p[axis] + w2 * pt.q[axis] * pt.q[axis]);
  g.grad[axis] = w2 * pt.q[axis];
  g.grad[3 + axis] = pt.p[axis];
  return g;
}

/// B3 = L_x p_y - L_y p_x + Z z/r - Q z/rho^2.
template <typename Scalar>
Graded<Scalar> graded_b3(const CoulombParams& params, const PhasePoint<Scalar>& pt) {
  const auto& q = pt.q;
  const auto& p = pt.p;
  const Scalar r = detail::checked_radius(q, "B3");
  const Scalar Z = Scalar(params.charge);
  const Scalar horiz_qp = q.x() * p.x() + q.y() * p.y();
  const Scalar horiz_pp = p.x() * p.x() + p.y() * p.y();

  // L_x p_y - L_y p_x = p_z (x p_x + y p_y) - z (p_x^2 + p_y^2)
  Graded<Scalar> g;
  g.value = p.z() * horiz_qp - q.z() * horiz_pp;
  g.grad << p.z() * p.x(), p.z() * p.y(), -horiz_pp,
      p.z() * q.x() - Scalar(2) * q.z() * p.x(), p.z() * q.y() - Scalar(2) * q.z() * p.y(),
      horiz_qp;

  const Scalar r3 = r * r * r;
  g.value += Z * q.z() / r;
  g.grad.template head<3>() += Z * (Vec3<Scalar>::UnitZ() / r - q.z() / r3 * q);

  if (params.ring > 0) {
    const Scalar rho2 = detail::checked_rho2(params.ring, q, "B3");
    const Scalar Q = Scalar(params.ring);
    g.value -= Q * q.z() / rho2;
    const Scalar c = Scalar(2) * Q * q.z() / (rho2 * rho2);
    g.grad[0] += c * q.x();
    g.grad[1] += c * q.y();
    g.grad[2] -= Q / rho2;
  }
  return g;
}

/// (H, A1, A2, A3) with gradients.
template <typename Scalar>
std::array<Graded<Scalar>, 4> graded_integrals(const OscillatorParams& params,
                                               const PhasePoint<Scalar>& pt) {
  return {graded_hamiltonian(params, pt), graded_total_angular(params.ring, pt),
          graded_axial_energy(params, pt), graded_lz(pt)};
}

/// (H, B1, B2, B3) with gradients.
template <typename Scalar>
std::array<Graded<Scalar>, 4> graded_integrals(const CoulombParams& params,
                                               const PhasePoint<Scalar>& pt) {
  return {graded_hamiltonian(params, pt), graded_total_angular(params.ring, pt), graded_lz(pt),
          graded_b3(params, pt)};
}

template <typename Scalar>
OscillatorIntegrals<Scalar> oscillator_integrals(const OscillatorParams& params,
                                                 const PhasePoint<Scalar>& pt) {
  const Scalar rho2 = detail::checked_rho2(params.ring, pt.q, "oscillator_integrals");
  const Scalar w2 = Scalar(params.omega) * Scalar(params.omega);
  const Vec3<Scalar> L = angular_momentum(pt);
  Scalar a1 = L.squaredNorm();
  if (params.ring > 0)
    a1 += Scalar(params.ring) * (Scalar(1) + pt.q.z() * pt.q.z() / rho2);
  return {hamiltonian(params, pt), a1,
          Scalar(0.5) * (pt.p.z() * pt.p.z() + w2 * pt.q.z() * pt.q.z()), L.z()};
}

template <typename Scalar>
CoulombIntegrals<Scalar> coulomb_integrals(const CoulombParams& params,
                                           const PhasePoint<Scalar>& pt) {
  const Scalar rho2 = detail::checked_rho2(params.ring, pt.q, "coulomb_integrals");
  const Scalar r = detail::checked_radius(pt.q, "coulomb_integrals");
  const Vec3<Scalar> L = angular_momentum(pt);
  Scalar b1 = L.squaredNorm();
  Scalar b3 = L.x() * pt.p.y() - L.y() * pt.p.x() + Scalar(params.charge) * pt.q.z() / r;
  if (params.ring > 0) {
    b1 += Scalar(params.ring) * r * r / rho2;
    b3 -= Scalar(params.ring) * pt.q.z() / rho2;
  }
  return {hamiltonian(params, pt), b1, L.z(), b3};
}

/// The four integrals as an array (H first), for either system.
template <typename Scalar>
std::array<Scalar, 4> integral_values(const OscillatorParams& params, const PhasePoint<Scalar>& pt) {
  const auto v = oscillator_integrals(params, pt);
  return {v.H, v.A1, v.A2, v.A3};
}

template <typename Scalar>
std::array<Scalar, 4> integral_values(const CoulombParams& params, const PhasePoint<Scalar>& pt) {
  const auto v = coulomb_integrals(params, pt);
  return {v.H, v.B1, v.B2, v.B3};
}

// Involution sets.

enum class InvolutionSet {
  oscillator_spherical,        // {H; A1; A3}
  oscillator_cylindrical,      // {H; A2; A3}
  oscillator_spheroidal_minus, // {H; A1 - 2a^2 (H - A2); A3}
  oscillator_spheroidal_plus,  // {H; A1 + 2a^2 (H - A2); A3}
  oscillator_cartesian_limit,  // {H; X1; X2}, Q = 0 only
  oscillator_angular_limit,    // {H; L^2; L_z}, Q = 0 only
  coulomb_spherical,           // {H; B1; B2}
  coulomb_parabolic,           // {H; B2; B3}
  coulomb_angular_limit,       // {H; L^2; L_x^2 + tau L_y^2}, Q = 0 only
  coulomb_runge_limit,         // {H; L_z; L_x p_y - L_y p_x + Z z/r}, Q = 0 only
};

std::string to_string(InvolutionSet set);
SystemKind system_of(InvolutionSet set);
bool requires_pure_limit(InvolutionSet set);

/// Every set applicable to a system; the limit sets are included only for Q = 0.
std::vector<InvolutionSet> involution_sets(const OscillatorParams& params);
std::vector<InvolutionSet> involution_sets(const CoulombParams& params);

struct InvolutionOptions {
  double a = 1.0;    // spheroidal family parameter
  double tau = 0.5;  // 0 < tau < 1
};

namespace detail {

template <typename Scalar>
std::array<Graded<Scalar>, 3> set_members(InvolutionSet set, const OscillatorParams& params,
                                          const PhasePoint<Scalar>& pt,
                                          const InvolutionOptions& opts) {
  const auto h = graded_hamiltonian(params, pt);
  switch (set) {
    case InvolutionSet::oscillator_spherical:
      return {h, graded_total_angular(params.ring, pt), graded_lz(pt)};
    case InvolutionSet::oscillator_cylindrical:
      return {h, graded_axial_energy(params, pt), graded_lz(pt)};
    case InvolutionSet::oscillator_spheroidal_minus:
    case InvolutionSet::oscillator_spheroidal_plus: {
      const Scalar sign = set == InvolutionSet::oscillator_spheroidal_minus ? Scalar(-1) : Scalar(1);
      const Scalar c = sign * Scalar(2) * Scalar(opts.a) * Scalar(opts.a);
      return {h, graded_total_angular(params.ring, pt) + c * (h - graded_axial_energy(params, pt)),
              graded_lz(pt)};
    }
    case InvolutionSet::oscillator_cartesian_limit:
      return {h, graded_cartesian_energy(params, pt, 0), graded_cartesian_energy(params, pt, 1)};
    case InvolutionSet::oscillator_angular_limit:
      return {h, graded_l2(pt), graded_lz(pt)};
    default:
      throw std::invalid_argument("involution set " + to_string(set) +
                                  " does not belong to the oscillator system");
  }
}

template <typename Scalar>
std::array<Graded<Scalar>, 3> set_members(InvolutionSet set, const CoulombParams& params,
                                          const PhasePoint<Scalar>& pt,
                                          const InvolutionOptions& opts) {
  const auto h = graded_hamiltonian(params, pt);
  switch (set) {
    case InvolutionSet::coulomb_spherical:
      return {h, graded_total_angular(params.ring, pt), graded_lz(pt)};
    case InvolutionSet::coulomb_parabolic:
      return {h, graded_lz(pt), graded_b3(params, pt)};
    case InvolutionSet::coulomb_angular_limit:
      return {h, graded_l2(pt),
              square(graded_lx(pt)) + Scalar(opts.tau) * square(graded_ly(pt))};
    case InvolutionSet::coulomb_runge_limit:
      return {h, graded_lz(pt), graded_b3(params, pt)};
    default:
      throw std::invalid_argument("involution set " + to_string(set) +
                                  " does not belong to the Coulomb system");
  }
}

}  // namespace detail

/// Pairwise brackets {f0,f1}, {f0,f2}, {f1,f2} of the chosen set, from exact gradients.
template <typename Params, typename Scalar>
std::array<Scalar, 3> involution_residuals(InvolutionSet set, const Params& params,
                                           const PhasePoint<Scalar>& pt,
                                           const InvolutionOptions& opts = {}) {
  if (requires_pure_limit(set) && params.ring != 0)
    throw std::invalid_argument("involution set " + to_string(set) + " requires Q = 0");
  if (set == InvolutionSet::coulomb_angular_limit && !(opts.tau > 0 && opts.tau < 1))
    throw std::invalid_argument("tau must lie in (0, 1)");
  const auto f = detail::set_members(set, params, pt, opts);
  return {poisson_bracket(f[0], f[1]), poisson_bracket(f[0], f[2]), poisson_bracket(f[1], f[2])};
}

/// All brackets among the four integrals; entry (i, j) = {I_i, I_j}.
template <typename Params, typename Scalar>
Eigen::Matrix<Scalar, 4, 4> pairwise_brackets(const Params& params, const PhasePoint<Scalar>& pt) {
  const auto f = graded_integrals(params, pt);
  Eigen::Matrix<Scalar, 4, 4> b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) b(i, j) = poisson_bracket(f[i], f[j]);
  return b;
}

template <typename Params, typename Scalar>
Eigen::Matrix<Scalar, 4, 6> integral_jacobian(const Params& params, const PhasePoint<Scalar>& pt) {
  const auto f = graded_integrals(params, pt);
  Eigen::Matrix<Scalar, 4, 6> jac;
  for (int i = 0; i < 4; ++i) jac.row(i) = f[i].grad.transpose();
  return jac;
}

inline constexpr double kRankThreshold = 1e-8;

template <typename Scalar>
struct IndependenceReport {
  int rank = 0;
  Eigen::Matrix<Scalar, 4, 1> singular_values;
  /// rank < 4: a critical configuration (circular or otherwise symmetric orbit).
  bool degenerate() const { return rank < 4; }
};

/// Numerical rank of the 4x6 Jacobian: sigma counts iff sigma / sigma_max > threshold.
template <typename Scalar>
IndependenceReport<Scalar> rank_of(const Eigen::Matrix<Scalar, 4, 6>& jac,
                                   double threshold = kRankThreshold) {
  Eigen::JacobiSVD<Eigen::Matrix<Scalar, 4, 6>> svd(jac);
  IndependenceReport<Scalar> report;
  report.singular_values = svd.singularValues();
  const Scalar top = report.singular_values[0];
  if (top == Scalar(0)) return report;
  for (int i = 0; i < 4; ++i)
    if (report.singular_values[i] / top > Scalar(threshold)) ++report.rank;
  return report;
}

template <typename Params, typename Scalar>
IndependenceReport<Scalar> independence_rank(const Params& params, const PhasePoint<Scalar>& pt,
                                             double threshold = kRankThreshold) {
  return rank_of(integral_jacobian(params, pt), threshold);
}

}  // namespace ring
