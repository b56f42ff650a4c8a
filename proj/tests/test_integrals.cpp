#include <doctest.h>

#include "ring/integrals.hpp"

#include <random>

using namespace ring;

namespace {

PhasePointd random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-1.5, 1.5), mom(-1, 1);
  for (;;) {
    const Vec3d q(pos(rng), pos(rng), pos(rng));
    if (std::hypot(q.x(), q.y()) > 0.25) return {q, Vec3d(mom(rng), mom(rng), mom(rng))};
  }
}

}  // namespace

TEST_SUITE("integrals") {

TEST_CASE("oscillator integral values") {
  const PhasePointd pt({1, 0, 0}, {0, 1, 0});
  const auto a = oscillator_integrals(OscillatorParams(1, 0), pt);
  CHECK(a.H == doctest::Approx(1));
  CHECK(a.A1 == doctest::Approx(1));
  CHECK(a.A2 == doctest::Approx(0));
  CHECK(a.A3 == doctest::Approx(1));
  const auto b = oscillator_integrals(OscillatorParams(1, 2), pt);
  CHECK(b.H == doctest::Approx(2));
  CHECK(b.A1 == doctest::Approx(3));
  CHECK(b.A2 == doctest::Approx(0));
  CHECK(b.A3 == doctest::Approx(1));
}

TEST_CASE("coulomb integral values") {
  const auto c = coulomb_integrals(CoulombParams(1, 0), PhasePointd({1, 0, 0}, {0, 1, 0}));
  CHECK(c.H == doctest::Approx(-0.5));
  CHECK(c.B1 == doctest::Approx(1));
  CHECK(c.B2 == doctest::Approx(1));
  CHECK(c.B3 == doctest::Approx(0).epsilon(1e-15));
}

TEST_CASE("A1 and B1 coincide") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const PhasePointd pt = random_point(rng);
    CHECK(oscillator_integrals(OscillatorParams(1.4, 2.2), pt).A1 ==
          doctest::Approx(coulomb_integrals(CoulombParams(0.7, 2.2), pt).B1));
  }
}

TEST_CASE("B3 reduces to the Runge-Lenz component for Q = 0 and to Lx py - Ly px on z = 0") {
  std::mt19937_64 rng(4);
  const CoulombParams params(1.3, 0.0);
  for (int i = 0; i < 10; ++i) {
    const PhasePointd pt = random_point(rng);
    const Vec3d L = angular_momentum(pt);
    const double lrl = L.x() * pt.p.y() - L.y() * pt.p.x() + 1.3 * pt.q.z() / pt.q.norm();
    CHECK(coulomb_integrals(params, pt).B3 == doctest::Approx(lrl));
  }
  PhasePointd eq = random_point(rng);
  eq.q.z() = 0;
  const Vec3d L = angular_momentum(eq);
  CHECK(coulomb_integrals(CoulombParams(1, 2), eq).B3 == L.x() * eq.p.y() - L.y() * eq.p.x());
}

TEST_CASE("graded integrals agree with finite differences") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 30; ++i) {
    const PhasePointd pt = random_point(rng);
    const auto check = [&](const auto& params) {
      const auto graded = graded_integrals(params, pt);
      for (int k = 0; k < 4; ++k) {
        const PhaseFunction<double> f = [&, k](const PhasePointd& s) {
          return integral_values(params, s)[k];
        };
        const Phase6d fd = numerical_gradient(f, pt);
        CHECK((fd - graded[k].grad).norm() <= 1e-6 * std::max(1.0, graded[k].grad.norm()));
        CHECK(graded[k].value == doctest::Approx(integral_values(params, pt)[k]));
      }
    };
    check(OscillatorParams(1.2, 1.5));
    check(CoulombParams(0.9, 1.5));
  }
}

TEST_CASE("A1 and A2 are not in involution") {
  // Value frozen from a symbolic evaluation of the bracket.
  const OscillatorParams params(1, 2);
  const PhasePointd pt({1, 1, 1}, {0.3, -0.2, 0.5});
  const auto g = graded_integrals(params, pt);
  CHECK(poisson_bracket(g[1], g[2]) == doctest::Approx(-0.72).epsilon(1e-12));
  const PhaseFunction<double> A1 = [&](const PhasePointd& s) { return oscillator_integrals(params, s).A1; };
  const PhaseFunction<double> A2 = [&](const PhasePointd& s) { return oscillator_integrals(params, s).A2; };
  CHECK(std::abs(poisson_bracket(A1, A2, pt) + 0.72) < 1e-6);
}

TEST_CASE("every integral commutes with H") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const PhasePointd pt = random_point(rng);
    const auto a = pairwise_brackets(OscillatorParams(1.1, 3.0), pt);
    const auto b = pairwise_brackets(CoulombParams(1.1, 3.0), pt);
    for (int k = 0; k < 4; ++k) {
      CHECK(std::abs(a(0, k)) < 1e-10);
      CHECK(std::abs(b(0, k)) < 1e-10);
    }
    CHECK((a + a.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("listed sets are in involution, analytic and finite-difference") {
  std::mt19937_64 rng(21);
  for (double Q : {0.0, 1.0, 3.0}) {
    const OscillatorParams op(1.3, Q);
    const CoulombParams cp(0.8, Q);
    for (int i = 0; i < 25; ++i) {
      const PhasePointd pt = random_point(rng);
      for (auto set : involution_sets(op))
        for (double r : involution_residuals(set, op, pt, {0.7, 0.5})) CHECK(std::abs(r) < 1e-10);
      for (auto set : involution_sets(cp))
        for (double r : involution_residuals(set, cp, pt, {1.0, 0.3})) CHECK(std::abs(r) < 1e-10);
    }
  }
  // Finite-difference oracle for two sets.
  const OscillatorParams op(1, 2);
  const CoulombParams cp(1, 2);
  const PhasePointd pt({0.9, -0.4, 0.7}, {0.3, 0.5, -0.2});
  const PhaseFunction<double> H = [&](const PhasePointd& s) { return hamiltonian(op, s); };
  const PhaseFunction<double> A2 = [&](const PhasePointd& s) { return oscillator_integrals(op, s).A2; };
  const PhaseFunction<double> A3 = [&](const PhasePointd& s) { return oscillator_integrals(op, s).A3; };
  CHECK(std::abs(poisson_bracket(H, A2, pt)) < 1e-6);
  CHECK(std::abs(poisson_bracket(A2, A3, pt)) < 1e-6);
  const PhaseFunction<double> B2 = [&](const PhasePointd& s) { return coulomb_integrals(cp, s).B2; };
  const PhaseFunction<double> B3 = [&](const PhasePointd& s) { return coulomb_integrals(cp, s).B3; };
  const PhaseFunction<double> HC = [&](const PhasePointd& s) { return hamiltonian(cp, s); };
  CHECK(std::abs(poisson_bracket(B2, B3, pt)) < 1e-6);
  CHECK(std::abs(poisson_bracket(HC, B3, pt)) < 1e-6);
}

TEST_CASE("limit sets need Q = 0") {
  const PhasePointd pt({1, 0.2, 0.3}, {0.1, 0.4, 0.2});
  CHECK(involution_sets(OscillatorParams(1, 0)).size() == 6);
  CHECK(involution_sets(OscillatorParams(1, 1)).size() == 4);
  CHECK(involution_sets(CoulombParams(1, 0)).size() == 4);
  CHECK(involution_sets(CoulombParams(1, 1)).size() == 2);
  CHECK_THROWS_AS(involution_residuals(InvolutionSet::oscillator_cartesian_limit,
                                       OscillatorParams(1, 1), pt),
                  std::invalid_argument);
  CHECK_THROWS_AS(involution_residuals(InvolutionSet::coulomb_angular_limit, CoulombParams(1, 0),
                                       pt, {1.0, 1.5}),
                  std::invalid_argument);
  const auto r = involution_residuals(InvolutionSet::oscillator_cartesian_limit,
                                      OscillatorParams(1, 0), pt);
  for (double v : r) CHECK(v == 0.0);
}

TEST_CASE("independence rank") {
  const PhasePointd pt({1, 0.5, -0.3}, {0.2, -0.7, 0.4});
  CHECK(independence_rank(OscillatorParams(1, 2), pt).rank == 4);
  CHECK(independence_rank(CoulombParams(1, 2), pt).rank == 4);
  // Circular equatorial orbit of the pure oscillator: a critical configuration.
  const auto circ = independence_rank(OscillatorParams(1, 0), PhasePointd({1, 0, 0}, {0, 1, 0}));
  CHECK(circ.degenerate());
  Eigen::Matrix<double, 4, 6> jac = Eigen::Matrix<double, 4, 6>::Zero();
  CHECK(rank_of(jac).rank == 0);
}

TEST_CASE("integrals in long double") {
  const PhasePoint<long double> pt({1.0L, 0.5L, -0.3L}, {0.2L, -0.7L, 0.4L});
  const auto v = oscillator_integrals(OscillatorParams(1, 2), pt);
  const auto d = oscillator_integrals(OscillatorParams(1, 2), PhasePointd({1, 0.5, -0.3}, {0.2, -0.7, 0.4}));
  CHECK(double(v.A1) == doctest::Approx(d.A1));
}

}
