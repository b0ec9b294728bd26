#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doslab/closedform.hpp"
#include "doslab/potential.hpp"

using namespace doslab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("sphere areas and ball volumes") {
  CHECK(sphere_area(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
}

TEST_CASE("free integrated DOS and its Laplace transform") {
  CHECK(free_integrated_dos(2, 1.0) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-14));
  CHECK(free_integrated_dos(2, 4.0) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(free_integrated_dos(3, 1.0) ==
        doctest::Approx(1.0 / (6.0 * kPi * kPi)).epsilon(1e-14));
  CHECK(free_integrated_dos(2, -1.0) == 0.0);
  CHECK(free_laplace(2, 1.0) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-14));
  CHECK(free_laplace(2, 2.0, 0.5) ==
        doctest::Approx(std::exp(-1.0) / (8.0 * kPi)).epsilon(1e-14));
  CHECK(free_laplace(3, 1.0) == doctest::Approx(std::pow(4.0 * kPi, -1.5)).epsilon(1e-14));
  CHECK_THROWS_AS(free_laplace(2, 0.0), std::invalid_argument);
}

TEST_CASE("half space values are the two sided average") {
  double t = 1.0, a = 2.0;
  CHECK(halfspace_integrated_dos(2, t, a) ==
        doctest::Approx(0.5 / (4.0 * kPi)).epsilon(1e-14));
  CHECK(halfspace_integrated_dos(2, 3.0, a) ==
        doctest::Approx(0.5 * (3.0 + 1.0) / (4.0 * kPi)).epsilon(1e-14));
  CHECK(halfspace_laplace(2, 1.0, a) ==
        doctest::Approx(0.5 * (1.0 + std::exp(-2.0)) / (4.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("gauss legendre integrates high degree polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  double i8 = 0.0, i9 = 0.0, total = 0.0;
  for (int k = 0; k < 5; ++k) {
    i8 += w[k] * std::pow(x[k], 8);
    i9 += w[k] * std::pow(x[k], 9);
    total += w[k];
  }
  CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(i8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
  CHECK(std::abs(i9) < 1e-14);
}

TEST_CASE("sphere quadratures integrate simple moments") {
  SphereQuadrature q2 = sphere_quadrature(2, 64);
  double total = 0.0, c2 = 0.0;
  for (std::size_t k = 0; k < q2.weights.size(); ++k) {
    total += q2.weights[k];
    c2 += q2.weights[k] * q2.nodes[k][0] * q2.nodes[k][0];
  }
  CHECK(total == doctest::Approx(2.0 * kPi).epsilon(1e-13));
  CHECK(c2 == doctest::Approx(kPi).epsilon(1e-13));

  SphereQuadrature q3 = sphere_quadrature(3, 16);
  total = 0.0;
  double z2 = 0.0;
  for (std::size_t k = 0; k < q3.weights.size(); ++k) {
    total += q3.weights[k];
    z2 += q3.weights[k] * q3.nodes[k][2] * q3.nodes[k][2];
  }
  CHECK(total == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  CHECK(z2 == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
}

TEST_CASE("constant angular profile reduces to the shifted free formulas") {
  double c = 0.8;
  SphereQuadrature q = sphere_quadrature(2, 64);
  AngularFunction f = [c](const std::array<double, 3>&) { return c; };
  CHECK(homogeneous_integrated_dos(f, q, 2.0) ==
        doctest::Approx(free_integrated_dos(2, 2.0, c)).epsilon(1e-12));
  CHECK(homogeneous_laplace(f, q, 1.5) ==
        doctest::Approx(free_laplace(2, 1.5, c)).epsilon(1e-12));

  SphereQuadrature q3 = sphere_quadrature(3, 24);
  CHECK(homogeneous_integrated_dos(f, q3, 2.0) ==
        doctest::Approx(free_integrated_dos(3, 2.0, c)).epsilon(1e-10));
}

TEST_CASE("quadrature refinement moves smooth values by less than a permille") {
  AngularFunction f = [](const std::array<double, 3>& u) {
    return 1.0 + 0.5 * u[0] + 0.25 * u[1] * u[1];
  };
  double a = homogeneous_integrated_dos(f, sphere_quadrature(2, 64), 2.0);
  double b = homogeneous_integrated_dos(f, sphere_quadrature(2, 256), 2.0);
  CHECK(std::abs(a - b) <= 1e-3 * std::abs(b));
}

TEST_CASE("laplace transform is the stieltjes integral of the integrated DOS") {
  // integral of exp(-s t) dN(t) = s * integral of exp(-s t) N(t) dt
  double s = 1.0;
  AngularFunction f = [](const std::array<double, 3>& u) { return 1.0 + 0.5 * u[0]; };
  SphereQuadrature q = sphere_quadrature(2, 128);
  double direct = homogeneous_laplace(f, q, s);

  double acc = 0.0;
  const int steps = 20000;
  const double tmax = 40.0;
  const double dt = tmax / steps;
  for (int k = 0; k < steps; ++k) {
    double t = (k + 0.5) * dt;
    acc += std::exp(-s * t) * homogeneous_integrated_dos(f, q, t) * dt;
  }
  CHECK(s * acc == doctest::Approx(direct).epsilon(5e-3));
}

TEST_CASE("angular table overloads agree with the function they tabulate") {
  AngularTable t;
  t.dim = 2;
  t.values.resize(256);
  for (int j = 0; j < 256; ++j)
    t.values[j] = 1.0 + 0.5 * std::cos(2.0 * kPi * j / 256.0);
  AngularFunction f = [](const std::array<double, 3>& u) { return 1.0 + 0.5 * u[0]; };
  SphereQuadrature q = sphere_quadrature(2, 256);
  CHECK(homogeneous_integrated_dos(t, q, 2.0) ==
        doctest::Approx(homogeneous_integrated_dos(f, q, 2.0)).epsilon(1e-4));
  CHECK(homogeneous_laplace(t, q, 1.0) ==
        doctest::Approx(homogeneous_laplace(f, q, 1.0)).epsilon(1e-4));
}

TEST_CASE("radial limits recover a homogeneous profile") {
  PotentialSpec hom;
  hom.kind = "homogeneous";
  hom.angular.dim = 2;
  hom.angular.values.resize(64);
  for (int j = 0; j < 64; ++j)
    hom.angular.values[j] = 1.0 + 0.5 * std::cos(2.0 * kPi * j / 64.0);

  PotentialSpec bump;
  bump.kind = "bump";
  bump.bump_amplitude = 3.0;
  bump.bump_radius = 2.0;
  bump.bump_profile = "gaussian";

  PotentialSpec sum;
  sum.kind = "sum";
  sum.terms = {hom, bump};

  AngularTable limit = asymptotic_limit_potential(sum, 2, 1e-8, 64);
  REQUIRE(limit.values.size() == 64);
  for (int j = 0; j < 64; ++j)
    CHECK(limit.values[j] == doctest::Approx(hom.angular.values[j]).epsilon(1e-6));
}

TEST_CASE("radial limit fails loudly when there is no limit") {
  // cell-hashed noise keeps changing at every doubling, so no ray settles
  PotentialSpec pc;
  pc.kind = "random";
  pc.random_seed = 5;
  pc.random_amplitude = 1.0;
  pc.random_cell = 1.0;
  CHECK_THROWS_AS(asymptotic_limit_potential(pc, 2, 1e-8, 16), std::runtime_error);
}
