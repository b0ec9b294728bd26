#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "doslab/grid.hpp"
#include "doslab/potential.hpp"

namespace doslab {

// H = -Delta_h + V on the grid. -Delta_h is the (2d+1)-point stencil with
// diagonal 2d/h^2 and off-diagonal -1/h^2 to each axis neighbor (wrapping on
// periodic grids, truncated on dirichlet ones). CSR storage is authoritative;
// apply() uses the stencil directly so results do not depend on row layout.
struct SparseOperator {
    Grid grid;
    std::vector<double> vdiag;         // V sampled on the grid
    std::vector<std::int64_t> row_ptr; // CSR, row-sorted columns
    std::vector<std::int64_t> col;
    std::vector<double> val;
    std::array<double, 2> enclosure;   // [min V, 4d/h^2 + max V]

    std::int64_t size() const { return grid.size(); }

    // y = H x (matrix-free stencil; deterministic reduction order)
    void apply(const double* x, double* y) const;
    void apply(const std::vector<double>& x, std::vector<double>& y) const;

    // y = (alpha*H + beta*I) x, used by the Chebyshev recurrence
    void apply_affine(double alpha, double beta, const double* x, double* y) const;

    std::vector<double> dense() const; // row-major N*N, for small N
};

SparseOperator assemble_hamiltonian(const Grid& grid, const PotentialSpec& spec);
SparseOperator assemble_hamiltonian(const Grid& grid, std::vector<double> vdiag);

} // namespace doslab
