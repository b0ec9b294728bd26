#include "doslab/heat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doslab/rng.hpp"
#include "doslab/spectral.hpp"

namespace doslab {

namespace {

// columns per apply_heat block, sized to keep work buffers modest
std::int64_t block_cols(std::int64_t n, std::int64_t want) {
    const std::int64_t cap = std::max<std::int64_t>(1, 4194304 / std::max<std::int64_t>(n, 1));
    return std::max<std::int64_t>(1, std::min(want, cap));
}

DiagonalField diagonal_dense(const HeatPropagator& prop, std::int64_t cap) {
    const SparseOperator& op = prop.op;
    const std::int64_t n = op.size();
    EigenSystem es = dense_eigensystem(op.dense(), n, cap);
    const double hd = std::pow(op.grid.spacing, op.grid.dim);
    DiagonalField out;
    out.mode = "exact";
    out.strategy = "dense";
    out.values.assign(n, 0.0);
    for (std::int64_t j = 0; j < n; ++j) {
        const double e = std::exp(-prop.s * es.values[j]);
        const double* v = es.vectors.data() + j * n;
        for (std::int64_t i = 0; i < n; ++i) out.values[i] += e * v[i] * v[i];
    }
    for (double& v : out.values) v /= hd;
    return out;
}

DiagonalField diagonal_tensor(const HeatPropagator& prop,
                              const std::vector<std::vector<double>>& axes) {
    const SparseOperator& op = prop.op;
    const Grid& g = op.grid;
    const int n = g.n_per_axis, d = g.dim;
    if (static_cast<int>(axes.size()) != d)
        throw std::invalid_argument("tensor diagonal needs one axis potential per dimension");
    for (const auto& a : axes)
        if (static_cast<int>(a.size()) != n)
            throw std::invalid_argument("axis potential length does not match grid");
    // the decomposition must reproduce V; the product below is formed from it
    double scale = 1.0;
    for (double v : op.vdiag) scale = std::max(scale, std::abs(v));
    for (std::int64_t i = 0; i < op.size(); ++i) {
        double s = 0.0;
        std::int64_t r = i;
        for (int a = d - 1; a >= 0; --a) {
            s += axes[a][r % n];
            r /= n;
        }
        if (std::abs(s - op.vdiag[i]) > 1e-12 * scale)
            throw std::invalid_argument("axis potentials do not reproduce the sampled potential");
    }

    Grid g1 = build_grid(1, g.half_width, g.spacing, g.boundary);
    std::vector<std::vector<double>> diag1(d, std::vector<double>(n, 0.0));
    for (int a = 0; a < d; ++a) {
        SparseOperator op1 = assemble_hamiltonian(g1, axes[a]);
        EigenSystem es = dense_eigensystem(op1.dense(), n, std::max<std::int64_t>(n, 1));
        for (int j = 0; j < n; ++j) {
            const double e = std::exp(-prop.s * es.values[j]);
            const double* v = es.vectors.data() + static_cast<std::int64_t>(j) * n;
            for (int i = 0; i < n; ++i) diag1[a][i] += e * v[i] * v[i];
        }
    }
    const double hd = std::pow(g.spacing, d);
    DiagonalField out;
    out.mode = "exact";
    out.strategy = "tensor";
    out.values.assign(op.size(), 0.0);
    for (std::int64_t i = 0; i < op.size(); ++i) {
        double p = 1.0;
        std::int64_t r = i;
        for (int a = d - 1; a >= 0; --a) {
            p *= diag1[a][r % n];
            r /= n;
        }
        out.values[i] = p / hd;
    }
    return out;
}

DiagonalField diagonal_probing(const HeatPropagator& prop, const DiagonalOptions& opt) {
    const SparseOperator& op = prop.op;
    const Grid& g = op.grid;
    const int n = g.n_per_axis, d = g.dim;
    const double h = g.spacing;
    const std::int64_t N = op.size();

    // stride giving same-coset separation m*h with gaussian kernel decay
    // exp(-(m h)^2 / 4s) <= eps/16
    std::int64_t m = static_cast<std::int64_t>(
        std::ceil(std::sqrt(4.0 * prop.s * std::log(16.0 / opt.crosstalk_eps)) / h));
    m = std::max<std::int64_t>(1, std::min<std::int64_t>(m, n));
    if (g.boundary == Boundary::periodic) {
        // wrap distance must also be >= m*h: round up to a divisor of n
        while (m < n && n % m != 0) ++m;
    }
    std::int64_t cols = 1;
    for (int a = 0; a < d; ++a) cols *= m;
    if (cols > opt.column_budget)
        throw std::invalid_argument(
            "probing would need " + std::to_string(cols) + " columns (stride " +
            std::to_string(m) + "); raise column_budget or use stochastic mode");

    DiagonalField out;
    out.mode = "exact";
    out.strategy = "probing";
    out.probe_count = cols;
    out.values.assign(N, 0.0);

    const std::int64_t chunk = block_cols(N, cols);
    std::vector<double> X(chunk * N), Y(chunk * N);
    std::vector<int> coset(d);
    for (std::int64_t c0 = 0; c0 < cols; c0 += chunk) {
        const std::int64_t nc = std::min(chunk, cols - c0);
        std::fill(X.begin(), X.begin() + nc * N, 0.0);
        for (std::int64_t c = 0; c < nc; ++c) {
            std::int64_t r = c0 + c;
            for (int a = d - 1; a >= 0; --a) {
                coset[a] = static_cast<int>(r % m);
                r /= m;
            }
            double* xc = X.data() + c * N;
            for (std::int64_t i = 0; i < N; ++i) {
                std::int64_t q = i;
                bool in = true;
                for (int a = d - 1; a >= 0; --a) {
                    if ((q % n) % m != coset[a]) {
                        in = false;
                        break;
                    }
                    q /= n;
                }
                if (in) xc[i] = 1.0;
            }
        }
        apply_heat(prop, X.data(), Y.data(), nc);
        for (std::int64_t c = 0; c < nc; ++c) {
            const double* xc = X.data() + c * N;
            const double* yc = Y.data() + c * N;
            for (std::int64_t i = 0; i < N; ++i)
                if (xc[i] != 0.0) out.values[i] = yc[i];
        }
    }
    const double hd = std::pow(h, d);
    for (double& v : out.values) v /= hd;
    return out;
}

DiagonalField diagonal_stochastic(const HeatPropagator& prop, const DiagonalOptions& opt) {
    if (opt.probes < 2)
        throw std::invalid_argument("stochastic diagonal needs at least 2 probes for a variance estimate");
    const std::int64_t N = prop.op.size();
    DiagonalField out;
    out.mode = "stochastic";
    out.strategy = "hutchinson";
    out.probe_count = opt.probes;
    out.seed = opt.seed;

    std::vector<double> sum(N, 0.0), sumsq(N, 0.0);
    const std::int64_t chunk = block_cols(N, opt.probes);
    std::vector<double> X(chunk * N), Y(chunk * N);
    for (std::int64_t p0 = 0; p0 < opt.probes; p0 += chunk) {
        const std::int64_t np = std::min(chunk, opt.probes - p0);
        for (std::int64_t p = 0; p < np; ++p) {
            double* xp = X.data() + p * N;
            const std::uint64_t base = static_cast<std::uint64_t>(p0 + p) * N;
            for (std::int64_t i = 0; i < N; ++i)
                xp[i] = static_cast<double>(sign_at(opt.seed, base + i));
        }
        apply_heat(prop, X.data(), Y.data(), np);
        // accumulate probes in index order: estimates independent of chunking
        for (std::int64_t p = 0; p < np; ++p) {
            const double* xp = X.data() + p * N;
            const double* yp = Y.data() + p * N;
            for (std::int64_t i = 0; i < N; ++i) {
                const double v = xp[i] * yp[i];
                sum[i] += v;
                sumsq[i] += v * v;
            }
        }
    }
    const double hd = std::pow(prop.op.grid.spacing, prop.op.grid.dim);
    const double P = static_cast<double>(opt.probes);
    out.values.resize(N);
    out.stderr_values.resize(N);
    for (std::int64_t i = 0; i < N; ++i) {
        const double mean = sum[i] / P;
        const double var = std::max(0.0, (sumsq[i] - P * mean * mean) / (P - 1.0));
        out.values[i] = mean / hd;
        out.stderr_values[i] = std::sqrt(var / P) / hd;
    }
    return out;
}

} // namespace

DiagonalField heat_diagonal(const HeatPropagator& prop, const DiagonalOptions& opt) {
    if (opt.mode == "stochastic") return diagonal_stochastic(prop, opt);
    if (opt.mode != "exact")
        throw std::invalid_argument("diagonal mode must be exact or stochastic");
    if (!opt.axis_potentials.empty()) return diagonal_tensor(prop, opt.axis_potentials);
    if (prop.op.size() <= opt.dense_cap) return diagonal_dense(prop, opt.dense_cap);
    return diagonal_probing(prop, opt);
}

WeightedTrace weighted_heat_trace(const Grid& grid, const DiagonalField& diag,
                                  const std::vector<double>& w) {
    if (w.size() != diag.values.size())
        throw std::invalid_argument("weight length does not match diagonal field");
    const double hd = std::pow(grid.spacing, grid.dim);
    WeightedTrace t;
    double acc = 0.0;
    for (size_t i = 0; i < w.size(); ++i) acc += w[i] * diag.values[i];
    t.value = hd * acc;
    if (!diag.stderr_values.empty()) {
        double var = 0.0;
        for (size_t i = 0; i < w.size(); ++i) {
            const double z = w[i] * diag.stderr_values[i];
            var += z * z;
        }
        t.stderr_value = hd * std::sqrt(var); // treats points as uncorrelated
    }
    return t;
}

WeightedTrace weighted_heat_trace(const HeatPropagator& prop, const std::vector<double>& w,
                                  const DiagonalOptions& opt) {
    return weighted_heat_trace(prop.op.grid, heat_diagonal(prop, opt), w);
}

} // namespace doslab
