#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doslab/chebyshev.hpp"
#include "doslab/operator.hpp"

namespace doslab {

// Heat computations compared against continuum formulas are trusted only for
// s >= s_min(h): below that the lattice dispersion no longer tracks |xi|^2.
inline double heat_s_min(double h) { return 10.0 * h * h; }

// Bulk statistics drop points within this distance of the box boundary
// (diffusion length of the dirichlet contamination).
inline double boundary_margin(double s) { return 6.0 * std::sqrt(s); }

struct DiagonalField {
    std::vector<double> values;        // (e^{-sH})_{xx} / h^d per grid point
    std::string mode;                  // "exact" | "stochastic"
    std::string strategy;              // "dense" | "tensor" | "probing" | "hutchinson"
    std::int64_t probe_count = 0;      // columns applied (probing) or random probes
    std::uint64_t seed = 0;            // stochastic only
    std::vector<double> stderr_values; // per point, stochastic only
};

struct DiagonalOptions {
    std::string mode = "exact";
    std::int64_t probes = 64;            // stochastic probe count (>= 2)
    std::uint64_t seed = 1;
    std::int64_t dense_cap = 5000;
    std::int64_t column_budget = 4096;   // max apply_heat columns in exact mode
    double crosstalk_eps = 1e-12;        // probing stride leakage target
    // Per-axis potential decomposition (V(x) = sum_ax axis[ax][x_ax]) when the
    // caller knows one; enables the tensor strategy on grids of any size.
    std::vector<std::vector<double>> axis_potentials;
};

// Kernel-diagonal estimates. Exact mode picks a strategy: dense eigensolve
// under dense_cap, per-axis tensor factorization when axis_potentials is
// supplied, else strided probing columns through the Chebyshev propagator
// (cross-talk bounded by crosstalk_eps via gaussian off-diagonal decay).
// Stochastic mode is the +-1 sign-probe estimator with per-point standard
// errors; it needs probes >= 2.
DiagonalField heat_diagonal(const HeatPropagator& prop, const DiagonalOptions& opt = {});

struct WeightedTrace {
    double value = 0.0;        // h^d * sum_x w(x) * diag(x)  ( = Tr(M_w e^{-sH}) )
    double stderr_value = 0.0; // aggregated from per-point errors (stochastic)
};

// Contraction of an existing diagonal field against a weight.
WeightedTrace weighted_heat_trace(const Grid& grid, const DiagonalField& diag,
                                  const std::vector<double>& w);
// Convenience: estimates the diagonal first, then contracts.
WeightedTrace weighted_heat_trace(const HeatPropagator& prop, const std::vector<double>& w,
                                  const DiagonalOptions& opt = {});

} // namespace doslab
