#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "ring/errors.hpp"
#include "ring/phase.hpp"

namespace ring {

/// Points closer than this to the z-axis are rejected wherever the ring
/// term 1/(x^2+y^2) is present.
inline constexpr double kAxisEpsilon = 1e-9;

/// Oscillator plus ring: V = Omega^2 |q|^2 / 2 + Q / (2 rho^2).
struct OscillatorParams {
  double omega;
  double ring;

  /// Throws std::invalid_argument unless omega > 0 and ring >= 0.
  OscillatorParams(double omega, double ring);
};

/// Coulomb plus ring (Hartmann): V = -Z/|q| + Q / (2 rho^2).
struct CoulombParams {
  double charge;
  double ring;

  /// Throws std::invalid_argument unless charge > 0 and ring >= 0.
  CoulombParams(double charge, double ring);
};

using SystemParams = std::variant<OscillatorParams, CoulombParams>;

enum class SystemKind { oscillator, coulomb };

inline SystemKind kind_of(const OscillatorParams&) { return SystemKind::oscillator; }
inline SystemKind kind_of(const CoulombParams&) { return SystemKind::coulomb; }
inline SystemKind kind_of(const SystemParams& params) {
  return std::visit([](const auto& p) { return kind_of(p); }, params);
}

std::string to_string(SystemKind kind);

namespace detail {

template <typename Scalar>
Scalar checked_rho2(double ring, const Vec3<Scalar>& q, const char* what) {
  const Scalar rho2 = cylindrical_radius2(q);
  if (ring > 0 && !(rho2 >= Scalar(kAxisEpsilon * kAxisEpsilon)))
    throw DomainError(std::string(what) + ": ring term evaluated on the z-axis at " +
                      describe_position(double(q.x()), double(q.y()), double(q.z())));
  return rho2;
}

template <typename Scalar>
Scalar checked_radius(const Vec3<Scalar>& q, const char* what) {
  const Scalar r = q.norm();
  if (!(r >= Scalar(kAxisEpsilon)))
    throw DomainError(std::string(what) + ": Coulomb term evaluated at the origin " +
                      describe_position(double(q.x()), double(q.y()), double(q.z())));
  return r;
}

}  // namespace detail

template <typename Scalar>
Scalar potential(const OscillatorParams& params, const Vec3<Scalar>& q) {
  const Scalar rho2 = detail::checked_rho2(params.ring, q, "v_oscillator");
  const Scalar w2 = Scalar(params.omega) * Scalar(params.omega);
  Scalar v = Scalar(0.5) * w2 * q.squaredNorm();
  if (params.ring > 0) v += Scalar(0.5) * Scalar(params.ring) / rho2;
  return v;
}

template <typename Scalar>
Scalar potential(const CoulombParams& params, const Vec3<Scalar>& q) {
  const Scalar rho2 = detail::checked_rho2(params.ring, q, "v_coulomb");
  const Scalar r = detail::checked_radius(q, "v_coulomb");
  Scalar v = -Scalar(params.charge) / r;
  if (params.ring > 0) v += Scalar(0.5) * Scalar(params.ring) / rho2;
  return v;
}

/// Gradient of the ring term Q/(2 rho^2).
template <typename Scalar>
Vec3<Scalar> ring_gradient(double ring, const Vec3<Scalar>& q, Scalar rho2) {
  if (ring == 0) return Vec3<Scalar>::Zero();
  const Scalar c = -Scalar(ring) / (rho2 * rho2);
  return {c * q.x(), c * q.y(), Scalar(0)};
}

template <typename Scalar>
Vec3<Scalar> potential_gradient(const OscillatorParams& params, const Vec3<Scalar>& q) {
  const Scalar rho2 = detail::checked_rho2(params.ring, q, "grad_v_oscillator");
  const Scalar w2 = Scalar(params.omega) * Scalar(params.omega);
  return w2 * q + ring_gradient(params.ring, q, rho2);
}

template <typename Scalar>
Vec3<Scalar> potential_gradient(const CoulombParams& params, const Vec3<Scalar>& q) {
  const Scalar rho2 = detail::checked_rho2(params.ring, q, "grad_v_coulomb");
  const Scalar r = detail::checked_radius(q, "grad_v_coulomb");
  return Scalar(params.charge) / (r * r * r) * q + ring_gradient(params.ring, q, rho2);
}

template <typename Params, typename Scalar>
Scalar hamiltonian(const Params& params, const PhasePoint<Scalar>& pt) {
  return Scalar(0.5) * pt.p.squaredNorm() + potential(params, pt.q);
}

/// Hamiltonian with its gradient (force and velocity).
template <typename Params, typename Scalar>
Graded<Scalar> graded_hamiltonian(const Params& params, const PhasePoint<Scalar>& pt) {
  Graded<Scalar> h;
  h.value = hamiltonian(params, pt);
  h.grad << potential_gradient(params, pt.q), pt.p;
  return h;
}

}  // namespace ring
