#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doslab/chebyshev.hpp"
#include "doslab/dos.hpp"
#include "doslab/grid.hpp"
#include "doslab/heat.hpp"
#include "doslab/operator.hpp"
#include "doslab/potential.hpp"
#include "doslab/rng.hpp"
#include "doslab/spectral.hpp"

using namespace doslab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("bin edges are exact multiples of the width") {
  auto e = uniform_bin_edges(1.0, 0.05);
  REQUIRE(e.size() == 21);
  CHECK(e[0] == 0.0);
  CHECK(e[7] == 7 * 0.05);
  CHECK(e[20] == 20 * 0.05);
  auto e2 = uniform_bin_edges(0.99, 0.05);
  CHECK(e2.size() == 21);  // rounded up to cover lam_max
}

TEST_CASE("laplace transform of a single occupied bin") {
  DOSHistogram h;
  h.bin_edges = {0.0, 0.5, 1.0};
  h.counts = {0.0, 12.0};
  h.density = {0.0, 12.0 / (16.0 * 0.5)};
  h.outside_window = {0, 0};
  h.volume = 16.0;
  h.window = {0.0, 100.0};
  LaplaceCurve c = laplace_of_histogram(h, {2.0}, 0.0);
  CHECK(c.values[0] == doctest::Approx(12.0 * std::exp(-2.0 * 0.75) / 16.0).epsilon(1e-14));
  CHECK(c.tail_bounds[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(c.flagged[0] == 1);  // exp(-2) is far above the 10 percent guard
}

TEST_CASE("histogram conserves the total eigenvalue count") {
  Grid g = build_grid(2, 3.0, 0.5, Boundary::dirichlet);
  std::vector<double> v(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) v[i] = uniform01_at(61, i);
  SparseOperator op = assemble_hamiltonian(g, std::move(v));
  auto edges = uniform_bin_edges(op.enclosure[1] + 1.0, 0.05);
  DOSHistogram h = eigencount_dos(op, edges);
  double total = 0.0;
  for (double c : h.counts) total += c;
  CHECK(total == doctest::Approx(double(g.size())).epsilon(1e-12));
}

TEST_CASE("integrated counts are monotone in the threshold") {
  Grid g = build_grid(2, 3.0, 0.5, Boundary::periodic);
  std::vector<double> v(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) v[i] = 2.0 * uniform01_at(62, i);
  SparseOperator op = assemble_hamiltonian(g, std::move(v));
  std::vector<double> lambdas = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  auto n = integrated_eigencount(op, lambdas);
  for (std::size_t k = 1; k < n.size(); ++k) CHECK(n[k] >= n[k - 1]);
}

TEST_CASE("tensor counting matches the dense spectrum exactly") {
  Grid g = build_grid(2, 4.0, 0.5, Boundary::periodic);
  PotentialSpec hs;
  hs.kind = "half_space";
  hs.half_space_level = 2.0;
  hs.half_space_axis = 1;
  hs.half_space_sign = 1;
  std::vector<double> v = sample_potential(hs, g);
  SparseOperator op = assemble_hamiltonian(g, v);
  auto axes = separable_potential(hs, g);
  REQUIRE(axes.has_value());

  auto edges = uniform_bin_edges(op.enclosure[1] + 1.0, 0.25);
  DOSHistogram dense = eigencount_dos(op, edges, /*dense_cap=*/100000, nullptr);
  DOSHistogram tensor = eigencount_dos(op, edges, /*dense_cap=*/1, &*axes);
  CHECK(dense.strategy == "dense");
  CHECK(tensor.strategy == "tensor");
  for (std::size_t b = 0; b < dense.counts.size(); ++b)
    CHECK(tensor.counts[b] == doctest::Approx(dense.counts[b]).epsilon(1e-14));
}

TEST_CASE("inertia counting matches the dense spectrum exactly") {
  Grid g = build_grid(2, 3.0, 0.5, Boundary::dirichlet);
  std::vector<double> v(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) v[i] = 3.0 * uniform01_at(63, i);
  SparseOperator op = assemble_hamiltonian(g, v);

  std::vector<double> lambdas = {2.0, 5.0, 9.0, 14.0};
  auto dense = integrated_eigencount(op, lambdas, /*dense_cap=*/100000);
  auto inertia = integrated_eigencount(op, lambdas, /*dense_cap=*/1);
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    CHECK(inertia[k] == doctest::Approx(dense[k]).epsilon(1e-14));
}

TEST_CASE("periodic counting beyond the dense cap needs axis potentials") {
  Grid g = build_grid(2, 4.0, 0.5, Boundary::periodic);
  SparseOperator op = assemble_hamiltonian(g, std::vector<double>(g.size(), 0.0));
  CHECK_THROWS_AS(integrated_eigencount(op, {1.0}, /*dense_cap=*/1, nullptr),
                  std::invalid_argument);
}

TEST_CASE("trusted window flags bins beyond the lattice resolution") {
  Grid g = build_grid(1, 8.0, 0.5, Boundary::periodic);
  SparseOperator op = assemble_hamiltonian(g, std::vector<double>(g.size(), 0.0));
  // 0.7 / h^2 = 2.8 with h = 0.5
  auto edges = uniform_bin_edges(6.0, 0.5);
  DOSHistogram h = eigencount_dos(op, edges);
  CHECK(h.window[1] == doctest::Approx(2.8));
  CHECK(h.outside_window.front() == 0);
  CHECK(h.outside_window.back() == 1);
}

TEST_CASE("linear fit recovers an affine law through the residue scaling") {
  std::vector<double> r = {2.1, 2.2, 2.3, 2.4};
  std::vector<double> scaled(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) scaled[k] = 0.7 + 0.3 * (r[k] - 2.0);
  LinearFit fit = residue_linear_fit(r, scaled, 2);
  CHECK(fit.intercept == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(fit.slope == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(fit.max_residual < 1e-12);
}

TEST_CASE("residue adequacy guard and default grid") {
  CHECK_THROWS_AS(check_residue_adequacy({2.05}, 2, std::exp(1.0)), std::invalid_argument);
  std::vector<double> rg = residue_r_grid(2, 40.0);
  REQUIRE(rg.size() == 4);
  for (double r : rg) {
    CHECK(r > 2.0);
    CHECK_NOTHROW(check_residue_adequacy({r}, 2, 40.0));
  }
}

TEST_CASE("residue route recovers the free heat diagonal level") {
  Grid g = build_grid(2, 16.0, 0.25, Boundary::dirichlet);
  SparseOperator op = assemble_hamiltonian(g, std::vector<double>(g.size(), 0.0));
  double s = 1.0;
  HeatPropagator prop = build_propagator(op, s);
  DiagonalOptions opt;
  opt.axis_potentials =
      std::vector<std::vector<double>>(2, std::vector<double>(g.n_per_axis, 0.0));
  DiagonalField diag = heat_diagonal(prop, opt);
  ResidueFit fit = residue_route(g, diag, s, residue_r_grid(2, 16.0), 8.0);
  CHECK(fit.laplace_estimate == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(0.02));
  CHECK(fit.dixmier_value ==
        doctest::Approx(fit.intercept_norm / 2.0).epsilon(1e-12));
}

TEST_CASE("ball average of a constant field is that constant") {
  Grid g = build_grid(2, 8.0, 0.25, Boundary::dirichlet);
  DiagonalField f;
  f.values.assign(g.size(), 3.25);
  f.mode = "exact";
  f.strategy = "synthetic";
  BallAverage lattice = ball_average(g, f, {3.0, 5.0, 7.0}, /*lattice_volume=*/true);
  CHECK(lattice.estimate == doctest::Approx(3.25).epsilon(1e-13));
  // with the continuum normalization the ratio is the lattice/ball volume quotient
  BallAverage cont = ball_average(g, f, {3.0, 5.0, 7.0}, /*lattice_volume=*/false);
  CHECK(cont.estimate == doctest::Approx(3.25).epsilon(0.05));
}

TEST_CASE("ball average input guards") {
  Grid g = build_grid(2, 4.0, 0.5, Boundary::dirichlet);
  DiagonalField f;
  f.values.assign(g.size(), 1.0);
  CHECK_THROWS_AS(ball_average(g, f, {}), std::invalid_argument);
  CHECK_THROWS_AS(ball_average(g, f, {-1.0}), std::invalid_argument);
  DiagonalField wrong;
  wrong.values.assign(3, 1.0);
  CHECK_THROWS_AS(ball_average(g, wrong, {2.0}), std::invalid_argument);
}

TEST_CASE("ball policies respect their margins") {
  double L = 40.0, s = 4.0;
  auto route = ball_policy_radii(L, s, "route");
  REQUIRE(route.size() == 16);
  double rmax = L - 6.0 * std::sqrt(s);
  CHECK(route.front() == doctest::Approx(0.75 * rmax));
  CHECK(route.back() == doctest::Approx(rmax));

  auto stab = ball_policy_radii(L, s, "stability");
  REQUIRE(stab.size() == 8);
  CHECK(stab.back() == doctest::Approx(L - 2.0 * std::sqrt(s)));

  CHECK_THROWS_AS(ball_policy_radii(2.0, 4.0, "route"), std::invalid_argument);
  CHECK_THROWS_AS(ball_policy_radii(40.0, 4.0, "luck"), std::invalid_argument);
}

TEST_CASE("projection window values integrate the spectral measure") {
  Grid g = build_grid(2, 6.0, 0.5, Boundary::dirichlet);
  std::vector<double> v(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) v[i] = uniform01_at(64, i);
  SparseOperator op = assemble_hamiltonian(g, v);

  double a = 1.0, b = 3.0;
  ProjectionDOS p = projection_dos(op, a, b, {3.0, 4.0, 5.0});
  auto ev = dense_eigenvalues(op.dense(), g.size());
  double expected = double(count_in_interval(ev, a, b)) / g.volume();
  CHECK(p.count_normalized == doctest::Approx(expected).epsilon(1e-12));
  for (double val : p.values) CHECK(val > 0.0);
}

TEST_CASE("abelian identity holds exactly for the constant field") {
  AbelianReport rep = abelian_check([](const std::array<double, 3>&) { return 1.0; }, 2);
  for (double r : rep.rights) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  for (double l : rep.lefts) CHECK(l == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.discrepancy < 1e-12);
}

TEST_CASE("abelian right side of the lorentz field is u/(1+u)") {
  AbelianReport rep = abelian_check(
      [](const std::array<double, 3>& x) {
        return 1.0 / (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      },
      2);
  REQUIRE(rep.r_grid.size() == 4);
  for (std::size_t k = 0; k < rep.r_grid.size(); ++k) {
    double u = rep.r_grid[k] - 1.0;
    CHECK(rep.rights[k] == doctest::Approx(u / (1.0 + u)).epsilon(1e-9));
  }
  // the finite ball means of the lorentz field have the closed form
  // log(1 + R^2) / R^2 in two dimensions
  for (std::size_t k = 0; k < rep.R_grid.size(); ++k) {
    double R2 = rep.R_grid[k] * rep.R_grid[k];
    CHECK(rep.lefts[k] == doctest::Approx(std::log1p(R2) / R2).epsilon(1e-9));
  }
}

TEST_CASE("abelian sides of the gaussian field agree and vanish") {
  AbelianReport rep = abelian_check(
      [](const std::array<double, 3>& x) {
        return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
      },
      2);
  for (std::size_t k = 0; k < rep.R_grid.size(); ++k) {
    double R2 = rep.R_grid[k] * rep.R_grid[k];
    CHECK(rep.lefts[k] == doctest::Approx((1.0 - std::exp(-R2)) / R2).epsilon(1e-9));
  }
  CHECK(rep.discrepancy < 0.002);
}
