#pragma once

#include <cstdint>
#include <vector>

#include "doslab/operator.hpp"

namespace doslab {

// Chebyshev approximation of lambda -> exp(-s*lambda) on the spectral
// enclosure of a fixed operator. The coefficient list is certified at build
// time by dense scalar sampling; apply() then inherits the scalar bound
// through the spectral theorem.
struct HeatPropagator {
    SparseOperator op;
    double s = 0.0;
    double tol = 1e-10;
    double lo = 0.0, hi = 1.0;    // interval the coefficients were built on
    std::vector<double> coeffs;   // f(y) = sum_k coeffs[k] T_k(y), y in [-1,1]
    double certified_error = 0.0; // max |series - exp(-s lambda)| over samples
    int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Builds the propagator, doubling the order from 32 until both the sampled
// error (10*order points on the enclosure) and the coefficient tail are
// under tol (tail under tol/10). Throws past the hard order cap with the
// smallest achievable tolerance in the message. s = 0 yields the identity.
HeatPropagator build_propagator(const SparseOperator& op, double s, double tol = 1e-10);

// y = e^{-sH} x for ncols stacked vectors (column c occupies [c*N, (c+1)*N)).
void apply_heat(const HeatPropagator& prop, const double* x, double* y,
                std::int64_t ncols = 1);
std::vector<double> apply_heat(const HeatPropagator& prop, const std::vector<double>& v);

// Scalar Clenshaw evaluation of the stored series at lambda (for tests and
// certification): approximates exp(-s*lambda) on [lo, hi].
double propagator_scalar(const HeatPropagator& prop, double lambda);

} // namespace doslab
