#include "doslab/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace doslab {

std::string to_string(Boundary b) {
    return b == Boundary::dirichlet ? "dirichlet" : "periodic";
}

Boundary boundary_from_string(const std::string& s) {
    if (s == "dirichlet") return Boundary::dirichlet;
    if (s == "periodic") return Boundary::periodic;
    throw std::invalid_argument("unknown boundary '" + s + "' (dirichlet|periodic)");
}

double Grid::volume() const {
    return std::pow(2.0 * half_width, dim);
}

Grid build_grid(int dim, double half_width, double spacing, Boundary boundary) {
    if (dim < 1) throw std::invalid_argument("grid dim must be >= 1");
    if (dim > 3) throw std::invalid_argument("grid dim > 3 rejected (memory guard)");
    if (!(half_width > 0.0) || !(spacing > 0.0))
        throw std::invalid_argument("grid requires half_width > 0 and spacing > 0");
    double ratio = half_width / spacing;
    double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 1.0)
        throw std::invalid_argument("half_width/spacing must be a positive integer, got " +
                                    std::to_string(ratio));
    int m = static_cast<int>(rounded);
    Grid g;
    g.dim = dim;
    g.half_width = half_width;
    g.spacing = spacing;
    g.boundary = boundary;
    g.n_per_axis = (boundary == Boundary::dirichlet) ? 2 * m - 1 : 2 * m;
    return g;
}

} // namespace doslab
