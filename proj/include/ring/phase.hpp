#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "ring/errors.hpp"

namespace ring {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

/// Gradient with respect to (x, y, z, p_x, p_y, p_z).
template <typename Scalar>
using Phase6 = Eigen::Matrix<Scalar, 6, 1>;

/// A point in phase space; unit reduced mass, so p is also the velocity.
template <typename Scalar>
struct PhasePoint {
  Vec3<Scalar> q = Vec3<Scalar>::Zero();
  Vec3<Scalar> p = Vec3<Scalar>::Zero();

  PhasePoint() = default;
  PhasePoint(const Vec3<Scalar>& position, const Vec3<Scalar>& momentum)
      : q(position), p(momentum) {}

  static PhasePoint from_vector(const Phase6<Scalar>& v) {
    return {v.template head<3>(), v.template tail<3>()};
  }

  Phase6<Scalar> as_vector() const {
    Phase6<Scalar> v;
    v << q, p;
    return v;
  }

  bool all_finite() const { return q.allFinite() && p.allFinite(); }
};

using Vec3d = Vec3<double>;
using Phase6d = Phase6<double>;
using PhasePointd = PhasePoint<double>;

template <typename Scalar>
using PhaseFunction = std::function<Scalar(const PhasePoint<Scalar>&)>;

/// A phase function value together with its exact gradient.
template <typename Scalar>
struct Graded {
  Scalar value{};
  Phase6<Scalar> grad = Phase6<Scalar>::Zero();
};

template <typename Scalar>
Vec3<Scalar> angular_momentum(const PhasePoint<Scalar>& pt) {
  return pt.q.cross(pt.p);
}

/// L_z with values at the rounding level of eps |q||p| replaced by exactly zero.
template <typename Scalar>
Scalar snapped_lz(const PhasePoint<Scalar>& pt) {
  using std::abs;
  const Scalar lz = pt.q.x() * pt.p.y() - pt.q.y() * pt.p.x();
  const Scalar noise = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * pt.q.norm() * pt.p.norm();
  return abs(lz) <= noise ? Scalar(0) : lz;
}

template <typename Scalar>
Scalar cylindrical_radius2(const Vec3<Scalar>& q) {
  return q.x() * q.x() + q.y() * q.y();
}

/// Default relative differentiation step, eps^(1/3).
template <typename Scalar>
Scalar default_step() {
  using std::cbrt;
  return cbrt(std::numeric_limits<Scalar>::epsilon());
}

/// Central-difference gradient over all six phase coordinates. The step used
/// for coordinate i is h * max(1, |x_i|). Exceptions thrown by f inside the
/// stencil propagate unchanged.
template <typename Scalar>
Phase6<Scalar> numerical_gradient(const PhaseFunction<Scalar>& f,
                                  const PhasePoint<Scalar>& pt,
                                  Scalar h = default_step<Scalar>());

/// Canonical bracket {f, g} from gradients.
template <typename Scalar>
Scalar poisson_bracket(const Phase6<Scalar>& grad_f,
                       const Phase6<Scalar>& grad_g) {
  return grad_f.template head<3>().dot(grad_g.template tail<3>()) -
         grad_f.template tail<3>().dot(grad_g.template head<3>());
}

template <typename Scalar>
Scalar poisson_bracket(const Graded<Scalar>& f, const Graded<Scalar>& g) {
  return poisson_bracket(f.grad, g.grad);
}

/// {f, g} with both gradients taken by central differences.
template <typename Scalar>
Scalar poisson_bracket(const PhaseFunction<Scalar>& f,
                       const PhaseFunction<Scalar>& g,
                       const PhasePoint<Scalar>& pt,
                       Scalar h = default_step<Scalar>()) {
  return poisson_bracket(numerical_gradient(f, pt, h),
                         numerical_gradient(g, pt, h));
}

template <typename Scalar>
Phase6<Scalar> numerical_gradient(const PhaseFunction<Scalar>& f,
                                  const PhasePoint<Scalar>& pt, Scalar h) {
  using std::abs;
  using std::max;
  if (!(h > Scalar(0))) throw std::invalid_argument("numerical_gradient: step must be positive");
  const Phase6<Scalar> x = pt.as_vector();
  Phase6<Scalar> grad;
  for (int i = 0; i < 6; ++i) {
    const Scalar step = h * max(Scalar(1), abs(x[i]));
    Phase6<Scalar> plus = x, minus = x;
    plus[i] += step;
    minus[i] -= step;
    const Scalar fp = f(PhasePoint<Scalar>::from_vector(plus));
    const Scalar fm = f(PhasePoint<Scalar>::from_vector(minus));
    if (!std::isfinite(static_cast<double>(fp)) || !std::isfinite(static_cast<double>(fm)))
      throw DomainError("numerical_gradient: non-finite value inside the stencil");
    // (plus[i] - minus[i]) is the step actually representable in floating point.
    grad[i] = (fp - fm) / (plus[i] - minus[i]);
  }
  return grad;
}

}  // namespace ring
