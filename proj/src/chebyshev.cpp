#include "doslab/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

namespace doslab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kOrderCap = 4096;

// interpolation coefficients for f on [-1,1] at m+1 first-kind Chebyshev
// nodes, by direct cosine sums
template <typename F>
std::vector<double> cheb_coeffs(F&& f, int m) {
    const int np = m + 1;
    std::vector<double> fv(np);
    for (int j = 0; j < np; ++j) fv[j] = f(std::cos(kPi * (j + 0.5) / np));
    std::vector<double> c(np);
    for (int k = 0; k < np; ++k) {
        double acc = 0.0;
        for (int j = 0; j < np; ++j) acc += fv[j] * std::cos(kPi * k * (j + 0.5) / np);
        c[k] = (k == 0 ? 1.0 : 2.0) * acc / np;
    }
    return c;
}

double clenshaw(const std::vector<double>& c, double y) {
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
        const double b = c[k] + 2.0 * y * b1 - b2;
        b2 = b1;
        b1 = b;
    }
    return c[0] + y * b1 - b2;
}

} // namespace

double propagator_scalar(const HeatPropagator& prop, double lambda) {
    const double y = (2.0 * lambda - (prop.lo + prop.hi)) / (prop.hi - prop.lo);
    return clenshaw(prop.coeffs, y);
}

HeatPropagator build_propagator(const SparseOperator& op, double s, double tol) {
    if (s < 0) throw std::invalid_argument("heat propagator needs s >= 0");
    if (tol <= 0) throw std::invalid_argument("heat propagator needs tol > 0");
    HeatPropagator prop;
    prop.op = op;
    prop.s = s;
    prop.tol = tol;
    prop.lo = op.enclosure[0];
    prop.hi = std::max(op.enclosure[1], prop.lo + 1.0);
    if (s < 0.0) throw std::invalid_argument("build_propagator: negative time");
    if (s == 0.0) {
        prop.coeffs = {1.0};
        prop.certified_error = 0.0;
        return prop;
    }

    const double mid = 0.5 * (prop.lo + prop.hi);
    const double rad = 0.5 * (prop.hi - prop.lo);
    auto target = [&](double y) { return std::exp(-s * (mid + rad * y)); };

    double best_err = std::numeric_limits<double>::infinity();
    for (int m = 32; m <= kOrderCap; m *= 2) {
        std::vector<double> c = cheb_coeffs(target, m);
        double tail = 0.0;
        for (int k = m - 2; k <= m; ++k) tail = std::max(tail, std::abs(c[k]));
        if (tail > tol / 10.0) {
            best_err = std::min(best_err, tail);
            continue;
        }
        // certify on a dense sample of the enclosure
        const int ns = 10 * (m + 1);
        double err = 0.0;
        for (int i = 0; i <= ns; ++i) {
            const double y = -1.0 + 2.0 * i / ns;
            err = std::max(err, std::abs(clenshaw(c, y) - target(y)));
        }
        best_err = std::min(best_err, err);
        if (err <= tol) {
            prop.coeffs = std::move(c);
            prop.certified_error = err;
            return prop;
        }
    }
    throw std::invalid_argument(
        "heat propagator order cap " + std::to_string(kOrderCap) +
        " reached: s * enclosure width too large for tol; achievable tolerance is about " +
        std::to_string(best_err * 10.0));
}

void apply_heat(const HeatPropagator& prop, const double* x, double* y, std::int64_t ncols) {
    const std::int64_t N = prop.op.size();
    const std::int64_t total = N * ncols;
    const auto& c = prop.coeffs;
    const int m = prop.order();
    if (prop.s == 0.0) {
        std::memcpy(y, x, sizeof(double) * total);
        return;
    }
    if (m == 0) {
        for (std::int64_t i = 0; i < total; ++i) y[i] = c[0] * x[i];
        return;
    }
    const double alpha = 2.0 / (prop.hi - prop.lo);
    const double beta = -(prop.lo + prop.hi) / (prop.hi - prop.lo);

    std::vector<double> t0(x, x + total), t1(total), t2(total);
    for (std::int64_t col = 0; col < ncols; ++col)
        prop.op.apply_affine(alpha, beta, t0.data() + col * N, t1.data() + col * N);
    for (std::int64_t i = 0; i < total; ++i) y[i] = c[0] * t0[i] + c[1] * t1[i];
    for (int k = 2; k <= m; ++k) {
        for (std::int64_t col = 0; col < ncols; ++col)
            prop.op.apply_affine(alpha, beta, t1.data() + col * N, t2.data() + col * N);
        const double ck = c[k];
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::int64_t i = 0; i < total; ++i) {
            const double v = 2.0 * t2[i] - t0[i];
            t2[i] = v;
            y[i] += ck * v;
        }
        t0.swap(t1);
        t1.swap(t2);
    }
}

std::vector<double> apply_heat(const HeatPropagator& prop, const std::vector<double>& v) {
    if (static_cast<std::int64_t>(v.size()) != prop.op.size())
        throw std::invalid_argument("apply_heat: vector length does not match operator");
    std::vector<double> y(v.size());
    apply_heat(prop, v.data(), y.data(), 1);
    return y;
}

} // namespace doslab
