#include <doctest.h>

#include "ring/potentials.hpp"

#include <random>

using namespace ring;

TEST_SUITE("potentials") {

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(OscillatorParams(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(OscillatorParams(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(CoulombParams(-1.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(CoulombParams(1.0, 0.0));
}

TEST_CASE("oscillator potential values") {
  CHECK(potential(OscillatorParams(1, 0), Vec3d(1, 0, 0)) == doctest::Approx(0.5));
  CHECK(potential(OscillatorParams(1, 2), Vec3d(1, 0, 0)) == doctest::Approx(1.5));
  CHECK(potential(OscillatorParams(2, 3), Vec3d(1, 1, 1)) == doctest::Approx(6.75));
}

TEST_CASE("coulomb potential values") {
  CHECK(potential(CoulombParams(1, 0), Vec3d(1, 0, 0)) == doctest::Approx(-1.0));
  CHECK(potential(CoulombParams(1, 2), Vec3d(1, 0, 0)) == doctest::Approx(0.0));
  CHECK(potential(CoulombParams(2, 1), Vec3d(0, 3, 4)) == doctest::Approx(-0.4 + 1.0 / 18));
}

TEST_CASE("gradients") {
  CHECK(potential_gradient(OscillatorParams(1, 0), Vec3d(1, 2, 3)).isApprox(Vec3d(1, 2, 3)));
  CHECK(potential_gradient(CoulombParams(1, 0), Vec3d(2, 0, 0)).isApprox(Vec3d(0.25, 0, 0)));
}

TEST_CASE("hamiltonian values") {
  const PhasePointd pt({1, 0, 0}, {0, 1, 0});
  CHECK(hamiltonian(OscillatorParams(1, 0), pt) == doctest::Approx(1.0));
  CHECK(hamiltonian(CoulombParams(1, 0), pt) == doctest::Approx(-0.5));
  CHECK(hamiltonian(OscillatorParams(1, 3), pt) == doctest::Approx(2.5));
}

TEST_CASE("axis and origin are rejected") {
  CHECK_THROWS_AS(potential(OscillatorParams(1, 1), Vec3d(0, 0, 1)), DomainError);
  CHECK_THROWS_AS(potential(CoulombParams(1, 0), Vec3d(0, 0, 0)), DomainError);
  CHECK_THROWS_AS(potential(CoulombParams(1, 1), Vec3d(1e-10, 0, 2)), DomainError);
  CHECK_NOTHROW(potential(OscillatorParams(1, 0), Vec3d(0, 0, 1)));
  try {
    potential(CoulombParams(1, 1), Vec3d(0, 0, 2));
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("(x=0, y=0, z=2)") != std::string::npos);
  }
}

TEST_CASE("analytic gradient matches finite differences at random points") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 50; ++i) {
    const Vec3d q(u(rng), u(rng), u(rng));
    if (std::hypot(q.x(), q.y()) < 0.2) continue;
    const PhasePointd pt(q, Vec3d(u(rng), u(rng), u(rng)));
    const auto check = [&](const auto& params) {
      const PhaseFunction<double> H = [&](const PhasePointd& s) { return hamiltonian(params, s); };
      const Phase6d fd = numerical_gradient(H, pt);
      const Phase6d exact = graded_hamiltonian(params, pt).grad;
      CHECK((fd - exact).norm() <= 1e-6 * std::max(1.0, exact.norm()));
    };
    check(OscillatorParams(1.7, 2.5));
    check(CoulombParams(1.3, 0.8));
  }
}

TEST_CASE("axial symmetry of the potentials") {
  const Vec3d q(0.8, -0.3, 0.5);
  const double a = 1.1;
  const Vec3d rotated(std::cos(a) * q.x() - std::sin(a) * q.y(),
                      std::sin(a) * q.x() + std::cos(a) * q.y(), q.z());
  CHECK(potential(OscillatorParams(1.2, 2), rotated) ==
        doctest::Approx(potential(OscillatorParams(1.2, 2), q)));
  CHECK(potential(CoulombParams(1.2, 2), rotated) ==
        doctest::Approx(potential(CoulombParams(1.2, 2), q)));
}

}
