#include <doctest.h>

#include <cmath>
#include <vector>

#include "doslab/grid.hpp"
#include "doslab/operator.hpp"
#include "doslab/potential.hpp"
#include "doslab/rng.hpp"
#include "doslab/spectral.hpp"

using namespace doslab;

TEST_CASE("1d dirichlet laplacian has the classical eigenvalues") {
  // -Delta_h on 3 interior points with h=1: eigenvalues 2 - sqrt(2), 2, 2 + sqrt(2)
  Grid g = build_grid(1, 2.0, 1.0, Boundary::dirichlet);
  REQUIRE(g.size() == 3);
  SparseOperator op = assemble_hamiltonian(g, std::vector<double>(3, 0.0));
  auto ev = dense_eigenvalues(op.dense(), 3);
  CHECK(ev[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ev[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("periodic laplacian annihilates constants") {
  Grid g = build_grid(2, 3.0, 0.5, Boundary::periodic);
  SparseOperator op = assemble_hamiltonian(g, std::vector<double>(g.size(), 0.0));
  std::vector<double> ones(g.size(), 1.0), out(g.size());
  op.apply(ones.data(), out.data());
  for (double y : out) CHECK(std::abs(y) < 1e-13);
}

TEST_CASE("sparse apply agrees with the dense matrix") {
  Grid g = build_grid(2, 2.0, 0.5, Boundary::dirichlet);
  std::vector<double> v(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) v[i] = uniform01_at(7, i);
  SparseOperator op = assemble_hamiltonian(g, v);
  std::vector<double> dense = op.dense();

  std::vector<double> x(g.size()), y(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) x[i] = 2.0 * uniform01_at(8, i) - 1.0;
  op.apply(x.data(), y.data());
  for (std::int64_t i = 0; i < g.size(); ++i) {
    double acc = 0.0;
    for (std::int64_t j = 0; j < g.size(); ++j) acc += dense[i * g.size() + j] * x[j];
    CHECK(y[i] == doctest::Approx(acc).epsilon(1e-12));
  }
}

TEST_CASE("adding a constant shifts the operator exactly") {
  Grid g = build_grid(1, 4.0, 0.5, Boundary::dirichlet);
  std::vector<double> v(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) v[i] = uniform01_at(9, i);
  std::vector<double> vc = v;
  for (double& w : vc) w += 2.5;
  SparseOperator a = assemble_hamiltonian(g, v);
  SparseOperator b = assemble_hamiltonian(g, vc);
  auto ea = dense_eigenvalues(a.dense(), g.size());
  auto eb = dense_eigenvalues(b.dense(), g.size());
  for (std::size_t k = 0; k < ea.size(); ++k)
    CHECK(eb[k] == doctest::Approx(ea[k] + 2.5).epsilon(1e-12));
}

TEST_CASE("spectral enclosure contains the spectrum") {
  Grid g = build_grid(2, 2.0, 0.5, Boundary::periodic);
  std::vector<double> v(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) v[i] = 3.0 * uniform01_at(10, i);
  SparseOperator op = assemble_hamiltonian(g, v);
  auto ev = dense_eigenvalues(op.dense(), g.size());
  CHECK(op.enclosure[0] <= ev.front());
  CHECK(op.enclosure[1] >= ev.back());
}
