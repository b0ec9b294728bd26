#include "doslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <lapacke.h>

namespace doslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// All LAPACKE calls below use LAPACK_COL_MAJOR on row-major buffers to avoid
// the internal transpose copy: symmetric inputs are layout-invariant, and
// singular values do not change under transposition (dimensions swapped).

void check_cap(std::int64_t n, std::int64_t cap, const char* what) {
    if (n > cap)
        throw std::invalid_argument(std::string(what) + ": size " + std::to_string(n) +
                                    " exceeds dense_cap " + std::to_string(cap) +
                                    "; raise dense_cap or use a windowed/banded path");
}

// flat index -> per-axis coordinates, axis 0 slowest (grid convention)
std::vector<int> coords_table(int n, int d, std::int64_t N) {
    std::vector<int> c(static_cast<size_t>(N) * d);
    for (std::int64_t f = 0; f < N; ++f) {
        std::int64_t r = f;
        for (int a = d - 1; a >= 0; --a) {
            c[f * d + a] = static_cast<int>(r % n);
            r /= n;
        }
    }
    return c;
}

} // namespace

std::vector<double> dense_eigenvalues(std::vector<double> a, std::int64_t n, std::int64_t cap) {
    check_cap(n, cap, "dense eigenvalues");
    if (n == 0) return {};
    if (static_cast<std::int64_t>(a.size()) != n * n)
        throw std::invalid_argument("dense eigenvalues: matrix buffer is not n*n");
    std::vector<double> w(n);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(n),
                                     a.data(), static_cast<lapack_int>(n), w.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
    return w;
}

EigenSystem dense_eigensystem(std::vector<double> a, std::int64_t n, std::int64_t cap) {
    check_cap(n, cap, "dense eigensystem");
    EigenSystem es;
    es.values.resize(n);
    if (n == 0) return es;
    if (static_cast<std::int64_t>(a.size()) != n * n)
        throw std::invalid_argument("dense eigensystem: matrix buffer is not n*n");
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                                     a.data(), static_cast<lapack_int>(n), es.values.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
    // column-major eigenvector columns == row-major rows: row j is vector j
    es.vectors = std::move(a);
    return es;
}

std::vector<double> dense_singular_values(std::vector<double> a, std::int64_t m, std::int64_t n) {
    if (m == 0 || n == 0) return {};
    if (static_cast<std::int64_t>(a.size()) != m * n)
        throw std::invalid_argument("singular values: matrix buffer is not m*n");
    std::vector<double> s(std::min(m, n));
    // row-major m x n read as column-major is the n x m transpose
    lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(n),
                                     static_cast<lapack_int>(m), a.data(),
                                     static_cast<lapack_int>(n), s.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("dgesdd failed, info=" + std::to_string(info));
    return s;
}

std::vector<double> operator_eigenvalues(const SparseOperator& op, std::int64_t cap) {
    check_cap(op.size(), cap, "operator eigenvalues (dense path)");
    return dense_eigenvalues(op.dense(), op.size(), cap);
}

InertiaCount inertia_below(const SparseOperator& op, double tau) {
    const Grid& g = op.grid;
    if (g.boundary == Boundary::periodic)
        throw std::invalid_argument(
            "inertia counting needs a dirichlet grid; the periodic wrap breaks the band");
    const std::int64_t n = op.size();
    std::int64_t w = 1;
    for (int a = 0; a < g.dim - 1; ++a) w *= g.n_per_axis;
    if ((w + 1) * n > 300000000LL)
        throw std::invalid_argument("banded factorization would exceed the memory budget");

    // lower band by column: band[j*(w+1) + r] = (H - tau)_{j+r, j}
    std::vector<double> band(static_cast<size_t>(w + 1) * n, 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t q = op.row_ptr[i]; q < op.row_ptr[i + 1]; ++q) {
            std::int64_t j = op.col[q];
            if (j > i) continue;
            band[j * (w + 1) + (i - j)] = op.val[q] - (i == j ? tau : 0.0);
        }
    }

    InertiaCount out;
    const double scale =
        std::max({std::abs(op.enclosure[0] - tau), std::abs(op.enclosure[1] - tau), 1.0});
    const double tiny = 1e-12 * scale;
    for (std::int64_t j = 0; j < n; ++j) {
        double* colj = &band[j * (w + 1)];
        double dj = colj[0];
        const std::int64_t k0 = std::max<std::int64_t>(0, j - w);
        for (std::int64_t k = k0; k < j; ++k) {
            const double ljk = band[k * (w + 1) + (j - k)];
            dj -= ljk * ljk * band[k * (w + 1)];
        }
        if (std::abs(dj) < tiny) {
            dj = tiny;
            ++out.jittered;
        }
        if (dj < 0) ++out.below;
        colj[0] = dj;
        const std::int64_t rmax = std::min(w, n - 1 - j);
        for (std::int64_t r = 1; r <= rmax; ++r) {
            const std::int64_t i = j + r;
            double s = colj[r];
            for (std::int64_t k = std::max<std::int64_t>(0, i - w); k < j; ++k)
                s -= band[k * (w + 1) + (i - k)] * band[k * (w + 1) + (j - k)] *
                     band[k * (w + 1)];
            colj[r] = s / dj;
        }
    }
    return out;
}

std::vector<double> windowed_eigenvalues(const SparseOperator& op, double a, double b,
                                         double tol) {
    std::vector<double> out;
    if (!(b > a)) return out;
    if (b <= op.enclosure[0] || a > op.enclosure[1]) return out;
    struct Seg {
        double lo, hi;
        std::int64_t clo, chi;
    };
    auto below = [&op](double t) { return inertia_below(op, t).below; };
    std::vector<Seg> stack{{a, b, below(a), below(b)}};
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        const std::int64_t m = s.chi - s.clo;
        if (m <= 0) continue;
        if (s.hi - s.lo <= 2 * tol) {
            out.insert(out.end(), m, 0.5 * (s.lo + s.hi));
            continue;
        }
        const double mid = 0.5 * (s.lo + s.hi);
        const std::int64_t cm = below(mid);
        stack.push_back({s.lo, mid, s.clo, cm});
        stack.push_back({mid, s.hi, cm, s.chi});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t count_in_interval(const std::vector<double>& sorted_eigs, double a, double b) {
    if (!(b > a)) return 0;
    auto lo = std::lower_bound(sorted_eigs.begin(), sorted_eigs.end(), a);
    auto hi = std::lower_bound(sorted_eigs.begin(), sorted_eigs.end(), b);
    return hi - lo;
}

std::int64_t count_in_interval(const SparseOperator& op, double a, double b,
                               std::int64_t cap) {
    if (!(b > a)) return 0;
    if (b <= op.enclosure[0] || a > op.enclosure[1]) return 0;
    if (op.size() <= cap) return count_in_interval(operator_eigenvalues(op, cap), a, b);
    if (op.grid.boundary == Boundary::dirichlet)
        return inertia_below(op, b).below - inertia_below(op, a).below;
    throw std::invalid_argument(
        "count_in_interval above dense_cap needs a dirichlet grid; periodic counting at this "
        "size goes through the separable eigencount route");
}

WeakQuasinorm weak_quasinorm(const std::vector<double>& mu, double p) {
    if (p <= 0) throw std::invalid_argument("weak_quasinorm needs p > 0");
    WeakQuasinorm q;
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(mu.size()); ++k) {
        const double v = std::pow(static_cast<double>(k + 1), 1.0 / p) * mu[k];
        if (v > q.value) {
            q.value = v;
            q.argmax = k;
        }
    }
    return q;
}

DixmierSummary dixmier_partial_sums(const std::vector<double>& mu,
                                    const std::vector<std::int64_t>& n_grid) {
    DixmierSummary d;
    const std::int64_t len = static_cast<std::int64_t>(mu.size());
    if (len == 0) throw std::invalid_argument("dixmier_partial_sums needs a nonempty list");
    std::vector<double> prefix(len + 1, 0.0);
    for (std::int64_t k = 0; k < len; ++k) prefix[k + 1] = prefix[k] + mu[k];
    for (std::int64_t nv : n_grid) {
        if (nv < 0) throw std::invalid_argument("N grid entries must be nonnegative");
        if (nv > len - 1) {
            nv = len - 1;
            d.truncated = true;
        }
        d.n_grid.push_back(nv);
        d.partial.push_back(prefix[nv + 1] / std::log(2.0 + static_cast<double>(nv)));
    }
    const auto m = static_cast<std::int64_t>(d.n_grid.size());
    std::vector<double> x(m);
    for (std::int64_t i = 0; i < m; ++i) x[i] = 1.0 / std::log(2.0 + static_cast<double>(d.n_grid[i]));
    for (std::int64_t i = 0; i + 1 < m; ++i) {
        const double denom = x[i] - x[i + 1];
        d.richardson.push_back(denom != 0.0
                                   ? (d.partial[i + 1] * x[i] - d.partial[i] * x[i + 1]) / denom
                                   : d.partial[i + 1]);
    }
    if (m == 1) {
        d.extrapolated = d.partial[0];
    } else {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::int64_t i = 0; i < m; ++i) {
            sx += x[i];
            sy += d.partial[i];
            sxx += x[i] * x[i];
            sxy += x[i] * d.partial[i];
        }
        const double det = m * sxx - sx * sx;
        const double slope = (m * sxy - sx * sy) / det;
        d.extrapolated = (sy - slope * sx) / m;
    }
    return d;
}

std::vector<double> connes_operator(const Grid& grid, const std::vector<double>& f,
                                    std::int64_t cap) {
    if (grid.boundary != Boundary::periodic)
        throw std::invalid_argument(
            "connes_operator needs a periodic grid: the multiplier acts on the torus");
    const std::int64_t N = grid.size();
    check_cap(N, cap, "connes_operator");
    if (static_cast<std::int64_t>(f.size()) != N)
        throw std::invalid_argument("connes_operator: f length does not match grid");
    const int n = grid.n_per_axis, d = grid.dim;
    const double h = grid.spacing;

    std::vector<double> lam1(n);
    for (int k = 0; k < n; ++k) lam1[k] = (2.0 - 2.0 * std::cos(2.0 * kPi * k / n)) / (h * h);
    std::vector<double> ct(static_cast<size_t>(n) * n);
    for (int k = 0; k < n; ++k)
        for (int dl = 0; dl < n; ++dl)
            ct[static_cast<size_t>(k) * n + dl] = std::cos(2.0 * kPi * k * dl / n);

    const std::vector<int> coords = coords_table(n, d, N);

    // kernel g(delta) = (1/N) sum_k (1+lambda(k))^{-d/2} prod_ax cos(2 pi k_ax delta_ax / n);
    // the sine parts cancel axis-by-axis because the multiplier is even per axis.
    std::vector<double> mult(N);
    for (std::int64_t kf = 0; kf < N; ++kf) {
        double lam = 0.0;
        for (int a = 0; a < d; ++a) lam += lam1[coords[kf * d + a]];
        mult[kf] = std::pow(1.0 + lam, -0.5 * d);
    }
    std::vector<double> g(N, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t df = 0; df < N; ++df) {
        double acc = 0.0;
        for (std::int64_t kf = 0; kf < N; ++kf) {
            double prod = mult[kf];
            for (int a = 0; a < d; ++a)
                prod *= ct[static_cast<size_t>(coords[kf * d + a]) * n + coords[df * d + a]];
            acc += prod;
        }
        g[df] = acc / static_cast<double>(N);
    }

    std::vector<double> A(static_cast<size_t>(N) * N);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < N; ++i) {
        for (std::int64_t j = 0; j < N; ++j) {
            std::int64_t df = 0;
            for (int a = 0; a < d; ++a) {
                const int delta = (coords[i * d + a] - coords[j * d + a] + n) % n;
                df = df * n + delta;
            }
            A[static_cast<size_t>(i) * N + j] = f[i] * g[df];
        }
    }
    return A;
}

std::vector<double> cwikel_singular_values(const SparseOperator& op,
                                           const std::vector<double>& w, int p,
                                           double z_re, double z_im, std::int64_t cap) {
    if (z_im == 0.0)
        throw std::invalid_argument("cwikel shift must be non-real: H + z can be singular on the real axis");
    if (p < 1) throw std::invalid_argument("cwikel power p must be a positive integer");
    const std::int64_t N = op.size();
    if (static_cast<std::int64_t>(w.size()) != N)
        throw std::invalid_argument("cwikel weight length does not match grid");

    std::vector<double> wp(N);
    for (std::int64_t i = 0; i < N; ++i) wp[i] = std::pow(w[i], p);

    auto dhalf = [&](double lam) {
        const double q = (lam + z_re) * (lam + z_re) + z_im * z_im;
        return std::pow(q, -0.5 * p);
    };

    bool vzero = true;
    for (double v : op.vdiag)
        if (v != 0.0) {
            vzero = false;
            break;
        }

    if (vzero && op.grid.boundary == Boundary::dirichlet) {
        // closed-form sine eigenbasis of the free dirichlet Laplacian
        const int n = op.grid.n_per_axis, d = op.grid.dim;
        const double h = op.grid.spacing;
        std::vector<double> q(static_cast<size_t>(n) * n), lam1(n);
        for (int j = 0; j < n; ++j) {
            const double sj = std::sin((j + 1) * kPi / (2.0 * (n + 1)));
            lam1[j] = 4.0 / (h * h) * sj * sj;
        }
        const double nrm = std::sqrt(2.0 / (n + 1));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                q[static_cast<size_t>(i) * n + j] =
                    nrm * std::sin((i + 1.0) * (j + 1.0) * kPi / (n + 1));

        const std::vector<int> coords = coords_table(n, d, N);
        std::vector<double> dcol(N);
        for (std::int64_t j = 0; j < N; ++j) {
            double lam = 0.0;
            for (int a = 0; a < d; ++a) lam += lam1[coords[j * d + a]];
            dcol[j] = dhalf(lam);
        }
        std::vector<double> s(static_cast<size_t>(N) * N);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::int64_t i = 0; i < N; ++i) {
            for (std::int64_t j = 0; j < N; ++j) {
                double qprod = 1.0;
                for (int a = 0; a < d; ++a)
                    qprod *= q[static_cast<size_t>(coords[i * d + a]) * n + coords[j * d + a]];
                s[static_cast<size_t>(i) * N + j] = wp[i] * qprod * dcol[j];
            }
        }
        return dense_singular_values(std::move(s), N, N);
    }

    check_cap(N, cap, "cwikel_singular_values (dense eigendecomposition)");
    EigenSystem es = dense_eigensystem(op.dense(), N, cap);
    std::vector<double> s(static_cast<size_t>(N) * N);
    for (std::int64_t j = 0; j < N; ++j) {
        const double dj = dhalf(es.values[j]);
        for (std::int64_t i = 0; i < N; ++i)
            s[static_cast<size_t>(i) * N + j] = wp[i] * es.vectors[j * N + i] * dj;
    }
    return dense_singular_values(std::move(s), N, N);
}

} // namespace doslab
