#include "doslab/operator.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace doslab {

namespace {

// neighbor of flat index i along axis ax in direction dir (+1/-1);
// returns -1 when the neighbor falls outside a dirichlet grid.
inline std::int64_t neighbor(const Grid& g, std::int64_t i, int ax, int dir) {
    // strides: axis 0 slowest
    std::int64_t stride = 1;
    for (int a = g.dim - 1; a > ax; --a) stride *= g.n_per_axis;
    std::int64_t k = (i / stride) % g.n_per_axis;
    std::int64_t kn = k + dir;
    if (g.boundary == Boundary::periodic) {
        kn = (kn + g.n_per_axis) % g.n_per_axis;
        return i + (kn - k) * stride;
    }
    if (kn < 0 || kn >= g.n_per_axis) return -1;
    return i + dir * stride;
}

} // namespace

void SparseOperator::apply(const double* x, double* y) const {
    const Grid& g = grid;
    const double inv_h2 = 1.0 / (g.spacing * g.spacing);
    const double diag_lap = 2.0 * g.dim * inv_h2;
    const std::int64_t n = g.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        double acc = (diag_lap + vdiag[i]) * x[i];
        for (int ax = 0; ax < g.dim; ++ax) {
            std::int64_t lo = neighbor(g, i, ax, -1);
            std::int64_t hi = neighbor(g, i, ax, +1);
            if (lo >= 0) acc -= inv_h2 * x[lo];
            if (hi >= 0) acc -= inv_h2 * x[hi];
        }
        y[i] = acc;
    }
}

void SparseOperator::apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.resize(x.size());
    apply(x.data(), y.data());
}

void SparseOperator::apply_affine(double alpha, double beta, const double* x, double* y) const {
    const Grid& g = grid;
    const double inv_h2 = 1.0 / (g.spacing * g.spacing);
    const double diag_lap = 2.0 * g.dim * inv_h2;
    const std::int64_t n = g.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        double acc = (diag_lap + vdiag[i]) * x[i];
        for (int ax = 0; ax < g.dim; ++ax) {
            std::int64_t lo = neighbor(g, i, ax, -1);
            std::int64_t hi = neighbor(g, i, ax, +1);
            if (lo >= 0) acc -= inv_h2 * x[lo];
            if (hi >= 0) acc -= inv_h2 * x[hi];
        }
        y[i] = alpha * acc + beta * x[i];
    }
}

std::vector<double> SparseOperator::dense() const {
    std::int64_t n = size();
    if (n > 20000) throw std::invalid_argument("dense() refused for N > 20000");
    std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
    for (std::int64_t r = 0; r < n; ++r)
        for (std::int64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
            a[r * n + col[p]] = val[p];
    return a;
}

SparseOperator assemble_hamiltonian(const Grid& grid, const PotentialSpec& spec) {
    return assemble_hamiltonian(grid, sample_potential(spec, grid));
}

SparseOperator assemble_hamiltonian(const Grid& grid, std::vector<double> vdiag) {
    if (static_cast<std::int64_t>(vdiag.size()) != grid.size())
        throw std::invalid_argument("vdiag length does not match grid size");
    SparseOperator op;
    op.grid = grid;
    op.vdiag = std::move(vdiag);

    const double inv_h2 = 1.0 / (grid.spacing * grid.spacing);
    const double diag_lap = 2.0 * grid.dim * inv_h2;
    const std::int64_t n = grid.size();

    op.row_ptr.assign(n + 1, 0);
    std::vector<std::pair<std::int64_t, double>> row;
    row.reserve(2 * grid.dim + 1);
    op.col.reserve(n * (2 * grid.dim + 1));
    op.val.reserve(n * (2 * grid.dim + 1));
    for (std::int64_t i = 0; i < n; ++i) {
        row.clear();
        row.emplace_back(i, diag_lap + op.vdiag[i]);
        for (int ax = 0; ax < grid.dim; ++ax) {
            for (int dir : {-1, +1}) {
                std::int64_t j = neighbor(grid, i, ax, dir);
                if (j >= 0 && j != i) row.emplace_back(j, -inv_h2);
            }
        }
        std::sort(row.begin(), row.end());
        // n_per_axis == 2 on a periodic grid makes both wraps hit the same
        // neighbor; merge duplicate columns.
        std::int64_t written = 0;
        for (const auto& [c, v] : row) {
            if (written > 0 && op.col.back() == c &&
                static_cast<std::int64_t>(op.col.size()) > op.row_ptr[i]) {
                op.val.back() += v;
            } else {
                op.col.push_back(c);
                op.val.push_back(v);
                ++written;
            }
        }
        op.row_ptr[i + 1] = static_cast<std::int64_t>(op.col.size());
    }

    double vmin = op.vdiag[0], vmax = op.vdiag[0];
    for (double v : op.vdiag) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    op.enclosure = {vmin, 4.0 * grid.dim * inv_h2 + vmax};
    return op;
}

} // namespace doslab
