#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doslab/operator.hpp"

namespace doslab {

inline constexpr std::int64_t kDenseCapDefault = 5000;

// Dense symmetric eigenvalues, ascending (LAPACK dsyevd). `a` is row-major
// n x n and is consumed. Throws when n > cap.
std::vector<double> dense_eigenvalues(std::vector<double> a, std::int64_t n,
                                      std::int64_t cap = kDenseCapDefault);

// Eigenvalues ascending plus eigenvectors; row j of `vectors` (row-major,
// so the n entries [j*n, (j+1)*n) are contiguous) is the eigenvector for
// values[j].
struct EigenSystem {
    std::vector<double> values;
    std::vector<double> vectors;
};
EigenSystem dense_eigensystem(std::vector<double> a, std::int64_t n,
                              std::int64_t cap = kDenseCapDefault);

// Singular values of a row-major m x n matrix, descending (LAPACK dgesdd).
std::vector<double> dense_singular_values(std::vector<double> a, std::int64_t m,
                                          std::int64_t n);

// All eigenvalues of H, ascending, through the dense path. Throws above cap
// with guidance toward the windowed inertia path.
std::vector<double> operator_eigenvalues(const SparseOperator& op,
                                         std::int64_t cap = kDenseCapDefault);

// Counts eigenvalues of H below tau through a banded LDL^T factorization of
// H - tau*I without pivoting (Sylvester inertia). Dirichlet grids only: the
// periodic wrap couples indices a full period apart and breaks the band.
// Pivots within an absolute tolerance of zero are nudged positive and
// counted in `jittered`; nonzero jitter means tau sits numerically on an
// eigenvalue and the count at that exact tau is boundary-sensitive.
struct InertiaCount {
    std::int64_t below = 0;
    int jittered = 0;
};
InertiaCount inertia_below(const SparseOperator& op, double tau);

// Eigenvalues of H inside [a, b), each bracketed to +-tol by bisection on
// the inertia count, with multiplicities. Windows outside the spectral
// enclosure return an empty list. Dirichlet grids only (see inertia_below).
std::vector<double> windowed_eigenvalues(const SparseOperator& op, double a, double b,
                                         double tol = 1e-9);

// # entries of a sorted eigenvalue list in the half-open window [a, b).
std::int64_t count_in_interval(const std::vector<double>& sorted_eigs, double a, double b);

// # eigenvalues of H in [a, b): dense path when the grid fits under cap,
// banded inertia difference otherwise (dirichlet only).
std::int64_t count_in_interval(const SparseOperator& op, double a, double b,
                               std::int64_t cap = kDenseCapDefault);

// sup_k (k+1)^{1/p} mu_k over singular values sorted descending.
struct WeakQuasinorm {
    double value = 0.0;
    std::int64_t argmax = 0;
};
WeakQuasinorm weak_quasinorm(const std::vector<double>& mu_descending, double p);

// Logarithmic Cesaro data for a Dixmier-trace estimate:
//   S_N = (sum_{k=0}^{N} mu_k) / log(2 + N)   (inclusive upper index)
// on the given N grid, two-point Richardson eliminations of consecutive grid
// entries in the variable 1/log(2+N), and a least-squares extrapolation of
// S_N to 1/log(2+N) -> 0 over the whole grid.
struct DixmierSummary {
    std::vector<std::int64_t> n_grid;  // clamped to the available mu length
    std::vector<double> partial;       // S_N per grid entry
    std::vector<double> richardson;    // size n_grid.size()-1
    double extrapolated = 0.0;         // intercept of S_N vs 1/log(2+N)
    bool truncated = false;            // some requested N exceeded the list
};
DixmierSummary dixmier_partial_sums(const std::vector<double>& mu_descending,
                                    const std::vector<std::int64_t>& n_grid);

// Dense matrix (row-major N x N) of M_f (1 - Delta_h)^{-d/2} on a periodic
// grid: the inverse power acts as the Fourier multiplier
// (1 + lambda_h(k))^{-d/2} with lambda_h the discrete-Laplacian symbol.
// f is sampled on the grid. Rejects dirichlet grids (the multiplier is
// defined through the torus Fourier transform) and sizes above cap.
std::vector<double> connes_operator(const Grid& grid, const std::vector<double>& f,
                                    std::int64_t cap = kDenseCapDefault);

// Singular values (descending) of (H + z)^{-p} M_w^p for non-real z,
// computed as singular values of M_w^p Q ((Lambda+Re z)^2 + (Im z)^2)^{-p/2}
// with H = Q Lambda Q^T. Real shifts are rejected (H + z may be singular).
// w holds the base weight samples; the diagonal used is w^p.
// V = 0 on a dirichlet grid uses the closed-form sine eigenbasis and is not
// limited by cap; any other operator goes through the dense solver.
std::vector<double> cwikel_singular_values(const SparseOperator& op,
                                           const std::vector<double>& w, int p,
                                           double z_re, double z_im,
                                           std::int64_t cap = kDenseCapDefault);

} // namespace doslab
