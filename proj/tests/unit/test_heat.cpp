#include <doctest.h>

#include <cmath>
#include <vector>

#include "doslab/chebyshev.hpp"
#include "doslab/grid.hpp"
#include "doslab/heat.hpp"
#include "doslab/operator.hpp"
#include "doslab/potential.hpp"
#include "doslab/rng.hpp"

using namespace doslab;

namespace {
constexpr double kPi = 3.14159265358979323846;

SparseOperator free_operator(int dim, double L, double h, Boundary b) {
  Grid g = build_grid(dim, L, h, b);
  return assemble_hamiltonian(g, std::vector<double>(g.size(), 0.0));
}
}  // namespace

TEST_CASE("free heat diagonal in the bulk approaches 1/(4 pi s)") {
  SparseOperator op = free_operator(2, 16.0, 0.25, Boundary::dirichlet);
  double s = 1.0;
  HeatPropagator prop = build_propagator(op, s);
  DiagonalOptions opt;
  opt.axis_potentials = std::vector<std::vector<double>>(
      2, std::vector<double>(op.grid.n_per_axis, 0.0));
  DiagonalField diag = heat_diagonal(prop, opt);
  CHECK(diag.strategy == "tensor");

  double b = op.grid.half_width - boundary_margin(s);
  double acc = 0.0;
  std::int64_t cnt = 0;
  for (std::int64_t i = 0; i < op.grid.size(); ++i) {
    auto x = op.grid.point(i);
    if (std::abs(x[0]) <= b && std::abs(x[1]) <= b) {
      acc += diag.values[i];
      ++cnt;
    }
  }
  double mean = acc / double(cnt);
  CHECK(mean == doctest::Approx(1.0 / (4.0 * kPi * s)).epsilon(0.01));
}

TEST_CASE("constant potential damps the diagonal by exp(-s c)") {
  Grid g = build_grid(2, 4.0, 0.5, Boundary::dirichlet);
  double c = 1.7, s = 0.8;
  SparseOperator op0 = assemble_hamiltonian(g, std::vector<double>(g.size(), 0.0));
  SparseOperator opc = assemble_hamiltonian(g, std::vector<double>(g.size(), c));
  DiagonalField d0 = heat_diagonal(build_propagator(op0, s, 1e-12));
  DiagonalField dc = heat_diagonal(build_propagator(opc, s, 1e-12));
  double factor = std::exp(-s * c);
  for (std::int64_t i = 0; i < g.size(); ++i)
    CHECK(dc.values[i] == doctest::Approx(factor * d0.values[i]).epsilon(1e-9));
}

TEST_CASE("heat diagonal is positive") {
  Grid g = build_grid(2, 3.0, 0.5, Boundary::dirichlet);
  std::vector<double> v(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) v[i] = 3.0 * uniform01_at(51, i);
  SparseOperator op = assemble_hamiltonian(g, std::move(v));
  DiagonalField diag = heat_diagonal(build_propagator(op, 1.0));
  for (double x : diag.values) CHECK(x > 0.0);
}

TEST_CASE("probing reproduces the dense diagonal on a non separable potential") {
  // n = 31 per axis keeps the probe distance (about 23 cells at s = 1) below
  // n, so colors genuinely share columns and crosstalk is exercised
  Grid g = build_grid(2, 8.0, 0.5, Boundary::dirichlet);
  std::vector<double> v(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) v[i] = 2.0 * uniform01_at(52, i);
  SparseOperator op = assemble_hamiltonian(g, std::move(v));
  HeatPropagator prop = build_propagator(op, 1.0, 1e-12);

  DiagonalField exact = heat_diagonal(prop);
  REQUIRE(exact.strategy == "dense");

  DiagonalOptions opt;
  opt.dense_cap = 1;  // force the probing path
  opt.column_budget = 100000;
  DiagonalField probed = heat_diagonal(prop, opt);
  REQUIRE(probed.strategy == "probing");
  for (std::int64_t i = 0; i < g.size(); ++i)
    CHECK(probed.values[i] == doctest::Approx(exact.values[i]).epsilon(1e-9).scale(1e-3));
}

TEST_CASE("tensor assembly matches the dense diagonal on a separable potential") {
  Grid g = build_grid(2, 4.0, 0.5, Boundary::dirichlet);
  PotentialSpec hs;
  hs.kind = "half_space";
  hs.half_space_level = 2.0;
  hs.half_space_axis = 1;
  hs.half_space_sign = 1;
  std::vector<double> v = sample_potential(hs, g);
  SparseOperator op = assemble_hamiltonian(g, v);
  HeatPropagator prop = build_propagator(op, 0.9, 1e-12);

  DiagonalField exact = heat_diagonal(prop);
  DiagonalOptions opt;
  opt.axis_potentials = *separable_potential(hs, g);
  DiagonalField tensor = heat_diagonal(prop, opt);
  REQUIRE(tensor.strategy == "tensor");
  for (std::int64_t i = 0; i < g.size(); ++i)
    CHECK(tensor.values[i] == doctest::Approx(exact.values[i]).epsilon(1e-9).scale(1e-3));
}

TEST_CASE("stochastic estimate brackets the exact diagonal") {
  Grid g = build_grid(2, 3.0, 0.5, Boundary::dirichlet);
  std::vector<double> v(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) v[i] = uniform01_at(53, i);
  SparseOperator op = assemble_hamiltonian(g, std::move(v));
  HeatPropagator prop = build_propagator(op, 1.0, 1e-12);

  DiagonalField exact = heat_diagonal(prop);
  DiagonalOptions opt;
  opt.mode = "stochastic";
  opt.probes = 256;
  opt.seed = 99;
  DiagonalField stoch = heat_diagonal(prop, opt);
  REQUIRE(stoch.strategy == "hutchinson");
  REQUIRE(stoch.stderr_values.size() == exact.values.size());

  // the trace (a single scalar) concentrates much faster than any single entry
  double t_exact = 0.0, t_stoch = 0.0, var = 0.0;
  std::int64_t within5 = 0;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    t_exact += exact.values[i];
    t_stoch += stoch.values[i];
    var += stoch.stderr_values[i] * stoch.stderr_values[i];
    if (std::abs(stoch.values[i] - exact.values[i]) <= 5.0 * stoch.stderr_values[i])
      ++within5;
  }
  CHECK(double(within5) >= 0.99 * double(g.size()));
  CHECK(std::abs(t_stoch - t_exact) <= 4.0 * std::sqrt(var));
}

TEST_CASE("same seed reproduces the stochastic diagonal bit for bit") {
  Grid g = build_grid(1, 6.0, 0.5, Boundary::periodic);
  SparseOperator op = assemble_hamiltonian(g, std::vector<double>(g.size(), 0.0));
  HeatPropagator prop = build_propagator(op, 1.0);
  DiagonalOptions opt;
  opt.mode = "stochastic";
  opt.probes = 32;
  opt.seed = 7;
  DiagonalField a = heat_diagonal(prop, opt);
  DiagonalField b = heat_diagonal(prop, opt);
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("weighted trace sums the diagonal against the weight") {
  Grid g = build_grid(1, 4.0, 0.5, Boundary::dirichlet);
  SparseOperator op = assemble_hamiltonian(g, std::vector<double>(g.size(), 0.0));
  HeatPropagator prop = build_propagator(op, 0.5, 1e-12);
  DiagonalField diag = heat_diagonal(prop);
  std::vector<double> w(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) w[i] = uniform01_at(54, i);
  WeightedTrace t = weighted_heat_trace(g, diag, w);
  double expected = 0.0;
  for (std::int64_t i = 0; i < g.size(); ++i) expected += w[i] * diag.values[i];
  expected *= g.spacing;
  CHECK(t.value == doctest::Approx(expected).epsilon(1e-13));

  WeightedTrace t2 = weighted_heat_trace(prop, w);
  CHECK(t2.value == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("heat time guard matches the stated rule") {
  CHECK(heat_s_min(0.25) == doctest::Approx(0.625));
  CHECK(boundary_margin(4.0) == doctest::Approx(12.0));
}
