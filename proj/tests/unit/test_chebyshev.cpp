#include <doctest.h>

#include <cmath>
#include <vector>

#include "doslab/chebyshev.hpp"
#include "doslab/grid.hpp"
#include "doslab/operator.hpp"
#include "doslab/rng.hpp"
#include "doslab/spectral.hpp"

using namespace doslab;

namespace {
SparseOperator random_operator(int dim, double L, double h, Boundary b, std::uint64_t seed,
                               double amp) {
  Grid g = build_grid(dim, L, h, b);
  std::vector<double> v(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) v[i] = amp * uniform01_at(seed, i);
  return assemble_hamiltonian(g, std::move(v));
}
}  // namespace

TEST_CASE("scalar approximation stays within the certified error") {
  SparseOperator op = random_operator(1, 8.0, 0.5, Boundary::periodic, 41, 3.0);
  for (double s : {0.3, 1.0, 4.0}) {
    HeatPropagator prop = build_propagator(op, s, 1e-10);
    CHECK(prop.certified_error <= 1e-10);
    double lo = prop.lo, hi = prop.hi;
    // the certification samples its own grid, so allow sampling slop between
    // grids but still catch a bound that is off by an order of magnitude
    for (int k = 0; k <= 200; ++k) {
      double lam = lo + (hi - lo) * k / 200.0;
      double err = std::abs(propagator_scalar(prop, lam) - std::exp(-s * lam));
      CHECK(err <= 2.0 * prop.certified_error + 1e-12);
    }
  }
}

TEST_CASE("propagator acts on eigenvectors by the exponential of the eigenvalue") {
  SparseOperator op = random_operator(1, 6.0, 0.5, Boundary::dirichlet, 42, 2.0);
  std::int64_t n = op.size();
  EigenSystem es = dense_eigensystem(op.dense(), n);
  HeatPropagator prop = build_propagator(op, 0.7, 1e-12);
  for (std::int64_t j = 0; j < n; j += 5) {
    std::vector<double> q(es.vectors.begin() + j * n, es.vectors.begin() + (j + 1) * n);
    std::vector<double> y = apply_heat(prop, q);
    double factor = std::exp(-0.7 * es.values[j]);
    for (std::int64_t i = 0; i < n; ++i)
      CHECK(y[i] == doctest::Approx(factor * q[i]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("heat apply agrees with the dense matrix exponential") {
  SparseOperator op = random_operator(1, 12.0, 0.5, Boundary::periodic, 43, 1.0);
  std::int64_t n = op.size();
  REQUIRE(n == 48);
  double s = 1.3;
  HeatPropagator prop = build_propagator(op, s, 1e-10);

  std::vector<double> x(n);
  for (std::int64_t i = 0; i < n; ++i) x[i] = 2.0 * uniform01_at(44, i) - 1.0;
  std::vector<double> y = apply_heat(prop, x);

  EigenSystem es = dense_eigensystem(op.dense(), n);
  std::vector<double> yd(n, 0.0);
  for (std::int64_t j = 0; j < n; ++j) {
    const double* q = es.vectors.data() + j * n;
    double dot = 0.0;
    for (std::int64_t i = 0; i < n; ++i) dot += q[i] * x[i];
    double wj = std::exp(-s * es.values[j]) * dot;
    for (std::int64_t i = 0; i < n; ++i) yd[i] += wj * q[i];
  }
  double num = 0.0, den = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    num += (y[i] - yd[i]) * (y[i] - yd[i]);
    den += yd[i] * yd[i];
  }
  CHECK(std::sqrt(num / den) <= 1e-8);
}

TEST_CASE("two half steps compose into a full step") {
  SparseOperator op = random_operator(2, 3.0, 0.5, Boundary::dirichlet, 45, 2.0);
  std::int64_t n = op.size();
  HeatPropagator half = build_propagator(op, 0.5, 1e-12);
  HeatPropagator full = build_propagator(op, 1.0, 1e-12);

  std::vector<double> x(n);
  for (std::int64_t i = 0; i < n; ++i) x[i] = 2.0 * uniform01_at(46, i) - 1.0;
  std::vector<double> y1 = apply_heat(half, apply_heat(half, x));
  std::vector<double> y2 = apply_heat(full, x);
  for (std::int64_t i = 0; i < n; ++i)
    CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("multi column apply matches column by column") {
  SparseOperator op = random_operator(1, 4.0, 0.5, Boundary::periodic, 47, 1.0);
  std::int64_t n = op.size();
  HeatPropagator prop = build_propagator(op, 0.9, 1e-10);
  const int ncols = 3;
  std::vector<double> x(n * ncols), y(n * ncols);
  for (std::int64_t i = 0; i < n * ncols; ++i) x[i] = uniform01_at(48, i);
  apply_heat(prop, x.data(), y.data(), ncols);
  for (int c = 0; c < ncols; ++c) {
    std::vector<double> xc(x.begin() + c * n, x.begin() + (c + 1) * n), yc(n);
    apply_heat(prop, xc.data(), yc.data(), 1);
    for (std::int64_t i = 0; i < n; ++i)
      CHECK(y[c * n + i] == doctest::Approx(yc[i]).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("zero time is the identity and negative time is rejected") {
  SparseOperator op = random_operator(1, 2.0, 1.0, Boundary::dirichlet, 49, 1.0);
  HeatPropagator id = build_propagator(op, 0.0);
  std::vector<double> x = {1.0, -2.0, 3.0};
  std::vector<double> y = apply_heat(id, x);
  for (int i = 0; i < 3; ++i) CHECK(y[i] == x[i]);
  CHECK_THROWS_AS(build_propagator(op, -1.0), std::invalid_argument);
}
