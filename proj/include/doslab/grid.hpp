// Cubic lattice truncations of R^d.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace doslab {

enum class Boundary { dirichlet, periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

// A cube (-L,L)^d sampled with spacing h. Dirichlet grids hold the interior
// points x = -L + h*(k+1), k = 0..n-1 with n = 2L/h - 1; periodic grids hold
// x = -L + h*k, k = 0..n-1 with n = 2L/h (the torus identifies -L with L).
struct Grid {
    int dim = 0;
    double half_width = 0.0;
    double spacing = 0.0;
    Boundary boundary = Boundary::dirichlet;
    int n_per_axis = 0;

    std::int64_t size() const {
        std::int64_t n = 1;
        for (int i = 0; i < dim; ++i) n *= n_per_axis;
        return n;
    }
    // Coordinate of axis index k along one axis.
    double coord(int k) const {
        return boundary == Boundary::dirichlet
                   ? -half_width + spacing * (k + 1)
                   : -half_width + spacing * k;
    }
    // Lexicographic flattening, axis 0 slowest, last axis fastest.
    std::int64_t flatten(const std::array<int, 3>& k) const {
        std::int64_t idx = 0;
        for (int i = 0; i < dim; ++i) idx = idx * n_per_axis + k[i];
        return idx;
    }
    std::array<int, 3> unflatten(std::int64_t idx) const {
        std::array<int, 3> k{0, 0, 0};
        for (int i = dim - 1; i >= 0; --i) {
            k[i] = static_cast<int>(idx % n_per_axis);
            idx /= n_per_axis;
        }
        return k;
    }
    std::array<double, 3> point(std::int64_t idx) const {
        auto k = unflatten(idx);
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int i = 0; i < dim; ++i) x[i] = coord(k[i]);
        return x;
    }
    double volume() const; // (2L)^d
};

// Validates and constructs. Throws std::invalid_argument on non-integral L/h
// or dim outside [1,3].
Grid build_grid(int dim, double half_width, double spacing, Boundary boundary);

} // namespace doslab
