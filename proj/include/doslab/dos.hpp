#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "doslab/heat.hpp"
#include "doslab/operator.hpp"
#include "doslab/spectral.hpp"

namespace doslab {

// ---------------------------------------------------------------------------
// Eigenvalue-count route
// ---------------------------------------------------------------------------

// Finite-volume DOS histogram with half-open bins [e_k, e_{k+1}); an
// eigenvalue landing exactly on the last edge is kept in the last bin so no
// mass is dropped at the advertised cutoff. density = counts / (volume *
// width) with volume = (2L)^d. The trusted window is [min V, c_win / h^2]
// with c_win = 0.7: above that the lattice dispersion no longer tracks the
// continuum one, so bins beyond it are flagged rather than hidden.
struct DOSHistogram {
  std::vector<double> bin_edges;          // size nbins + 1
  std::vector<double> counts;             // eigenvalues per bin
  std::vector<double> density;            // counts / (volume * width)
  std::vector<std::uint8_t> outside_window;  // 1 where the bin leaves the window
  double volume = 0.0;                    // (2L)^d
  std::array<double, 2> window{0.0, 0.0};
  std::string strategy;                   // "tensor" | "dense" | "inertia"
};

// Uniform bin edges 0, w, 2w, ..., covering [0, lam_max] (last edge >= lam_max).
std::vector<double> uniform_bin_edges(double lam_max, double width = 0.05);

// Energy cutoff for Laplace comparisons at time s: truncating the histogram
// at 6.9/s + max V keeps the neglected heat-kernel mass near e^{-6.9} of the
// retained part, i.e. about 0.1%.
double laplace_lambda_max(double s, double vmax);

// Eigenvalue counting on the cube. Strategy is picked automatically:
//   tensor  - axis_potentials supplied (V separable): per-axis 1D spectra
//             combined by sorted-merge counting; exact and fast.
//   dense   - N <= dense_cap: full LAPACK spectrum.
//   inertia - Dirichlet grids beyond the cap: LDL^T inertia per bin edge.
// Throws for periodic grids beyond the cap with no axis decomposition.
DOSHistogram eigencount_dos(const SparseOperator& op, const std::vector<double>& edges,
                            std::int64_t dense_cap = kDenseCapDefault,
                            const std::vector<std::vector<double>>* axis_potentials = nullptr);

// Normalized integrated DOS: count of eigenvalues <= lambda divided by
// (2L)^d, one value per requested lambda. Same strategy selection.
std::vector<double> integrated_eigencount(const SparseOperator& op,
                                          const std::vector<double>& lambdas,
                                          std::int64_t dense_cap = kDenseCapDefault,
                                          const std::vector<std::vector<double>>* axis_potentials = nullptr);

// Laplace transform of a DOS histogram by the midpoint rule,
//   value(s) = sum_k density_k * width_k * exp(-s * midpoint_k).
// tail_bound is the relative size e^{-s (lam_last - vmax)} of what the
// truncation can hide; entries with tail_bound > 0.1 are flagged.
struct LaplaceCurve {
  std::vector<double> s_grid;
  std::vector<double> values;
  std::vector<double> tail_bounds;
  std::vector<std::uint8_t> flagged;
};

LaplaceCurve laplace_of_histogram(const DOSHistogram& hist, const std::vector<double>& s_grid,
                                  double vmax = 0.0);

// ---------------------------------------------------------------------------
// Projection route (small boxes only)
// ---------------------------------------------------------------------------

// diag of the spectral projection 1_{[a,b)}(H) divided by h^d, ball-averaged
// over the given radii. boundary_flag marks radii R > L - 6 sqrt(s*) with
// s* = 1/(b-a), a diffusion-length proxy for how far the window "sees".
struct ProjectionDOS {
  double a = 0.0, b = 0.0;
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<std::uint8_t> boundary_flag;
  double count_normalized = 0.0;  // trace of the projection / (2L)^d
};

ProjectionDOS projection_dos(const SparseOperator& op, double a, double b,
                             const std::vector<double>& radii,
                             std::int64_t dense_cap = kDenseCapDefault);

// ---------------------------------------------------------------------------
// Heat-kernel ball-average route
// ---------------------------------------------------------------------------

// Ball averages of a heat diagonal: for each R,
//   value(R) = h^d * sum_{|x| <= R} diag(x) / vol(R),
// vol(R) = omega_d R^d / d by default (continuum normalization) or
// h^d * #{|x| <= R} with lattice_volume = true. estimate = mean over radii.
struct BallAverage {
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> stderr_values;  // nonzero only for stochastic diagonals
  double estimate = 0.0;
  double stderr_value = 0.0;
  bool lattice_volume = false;
};

BallAverage ball_average(const Grid& grid, const DiagonalField& diag,
                         const std::vector<double>& radii, bool lattice_volume = false);

// Radius policies, both keeping every sample at least a diffusion length away
// from the boundary:
//   "route":     16 radii spanning [0.75, 1.0] * (L - 6 sqrt(s)), averaged.
//                Used when comparing absolute values between methods.
//   "stability": 8 radii spanning [0.9, 1.0] * (L - 2 sqrt(s)), averaged.
//                Used for differences of two runs on the same box, where the
//                common boundary error cancels and a wider ball is worth more
//                than extra margin.
// Throws when the margin consumes the whole box (L too small for this s).
std::vector<double> ball_policy_radii(double half_width, double s, const std::string& policy);

// ---------------------------------------------------------------------------
// Residue (weighted-trace) route
// ---------------------------------------------------------------------------

// Traces of e^{-sH} against weights w_r(x) = (1 + |x/ell|^2)^{-r/2} on a grid
// of exponents r > d, extrapolated linearly in (r - d) to r = d:
//
//   scaled_raw(r)  = (r - d) * h^d sum_x w_r(x) diag(x) ... raw residue data
//   scaled_norm(r) = omega_d * h^d sum_x w_r(x) diag(x) / mass(w_r)
//                    with mass(w_r) = h^d sum_x w_r(x); normalizing by the
//                    weight's own lattice mass cancels the leading finite-L
//                    error of the (r-d) prefactor.
//
// The intercept of scaled_norm at r = d estimates omega_d * nu(s), so
//   laplace_estimate = intercept / omega_d   (comparable to the other routes)
//   dixmier_value    = intercept / d         (the weighted-trace functional)
struct ResidueFit {
  double s = 0.0;
  double ell = 0.0;
  std::vector<double> r_grid;
  std::vector<double> scaled_raw;
  std::vector<double> scaled_norm;
  double intercept_raw = 0.0;
  double intercept_norm = 0.0;
  double laplace_estimate = 0.0;
  double dixmier_value = 0.0;
  double fit_residual = 0.0;  // max |linear fit - data| over scaled_norm
};

// Least-squares line c + b u through (u_i = r_i - d, y_i); returns intercept,
// slope, and max residual. Exact for data of the form c/(r-d) + b once
// multiplied through by (r-d).
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double max_residual = 0.0;
};

LinearFit residue_linear_fit(const std::vector<double>& r_grid,
                             const std::vector<double>& scaled, int dim);

// Adequacy gate: every exponent must satisfy (r - d) * ln(L) >= 2 (lengths
// measured in units of 1), otherwise the pole and the box cutoff are not
// separated and the fit is rejected, suggesting the minimal usable L.
void check_residue_adequacy(const std::vector<double>& r_grid, int dim, double half_width);

// Default exponent grid: r = d + u0 + {0, 0.1, 0.2, 0.3} with u0 chosen 2%
// above the adequacy threshold 2 / ln(L).
std::vector<double> residue_r_grid(int dim, double half_width);

ResidueFit residue_route(const Grid& grid, const DiagonalField& diag, double s,
                         const std::vector<double>& r_grid, double ell = 8.0);

// ---------------------------------------------------------------------------
// Abelian consistency check (quadrature, no operators)
// ---------------------------------------------------------------------------

// For a bounded field F on R^d, compares the two normalizations whose
// equality as r -> 1+ / R -> infinity underpins the residue route:
//   left(R)  = (1/|B_R|) Integral_{B_R} F
//   right(r) = (r - 1) / |B_1| * Integral_{R^d} <t>^{-dr} F(t) dt
// left is extrapolated in the basis {1, 1/R^2}; right linearly in (r - 1).
//
// The weighted integral is computed exactly on the pole by the substitution
// x = (1+rho^2)^{-1}, x = u^{2/(d(r-1))}, which turns it into a bounded
// integral over u in (0,1]; composite Gauss-Legendre panels dyadic toward
// u = 1 resolve the compressed rho-range there. Samplers must tolerate very
// large |t| (the u-nodes reach astronomically large radii).
struct AbelianReport {
  std::vector<double> r_grid;
  std::vector<double> rights;
  std::vector<double> R_grid;
  std::vector<double> lefts;
  double right_extrapolated = 0.0;
  double left_extrapolated = 0.0;
  double discrepancy = 0.0;  // |left - right| after extrapolation
};

using FieldFunction = std::function<double(const std::array<double, 3>&)>;

AbelianReport abelian_check(const FieldFunction& field, int dim,
                            const std::vector<double>& r_grid = {1.02, 1.04, 1.06, 1.08},
                            const std::vector<double>& R_grid = {10.0, 20.0, 40.0});

}  // namespace doslab
