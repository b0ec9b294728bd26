// Declarative potential specifications sampled onto grids.
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "doslab/grid.hpp"

namespace doslab {

// Angular data on S^{d-1}. For d=2 a uniform table over theta in [0,2pi)
// with nearest-angle lookup; for d=3 a latitude-longitude table (n_lat rows
// uniform in theta over [0,pi], n_lon columns uniform in phi) with bilinear
// interpolation.
struct AngularTable {
    int dim = 2;
    int n_lat = 0; // d=3 only
    std::vector<double> values;

    double lookup(const std::array<double, 3>& unit) const;
    double mean() const; // area-weighted angular average
};

struct PotentialSpec {
    // kind: zero | constant | half_space | homogeneous | periodic | bump |
    //       random | sum
    std::string kind = "zero";

    double constant_value = 0.0;                        // constant
    double half_space_level = 0.0;                      // half_space
    int half_space_axis = 1;                            // half_space, 1-based
    int half_space_sign = +1;                           // half_space
    AngularTable angular;                               // homogeneous
    std::vector<double> periodic_cell;                  // periodic
    std::vector<int> periodic_dims;                     // periodic sample grid
    std::vector<double> periodic_samples;               // periodic
    double bump_amplitude = 0.0;                        // bump
    std::array<double, 3> bump_center{0.0, 0.0, 0.0};   // bump
    double bump_radius = 1.0;                           // bump
    std::string bump_profile = "gaussian";              // bump | indicator
    std::uint64_t random_seed = 0;                      // random
    double random_amplitude = 0.0;                      // random
    double random_cell = 1.0;                           // random
    std::vector<PotentialSpec> terms;                   // sum

    std::string to_json() const;
    static PotentialSpec from_json(const std::string& text);
};

// Pointwise sampling onto the grid. Homogeneous specs evaluate the angular
// table at x/|x| and take the angular mean at the origin. Throws on specs
// invalid for the grid dimension.
std::vector<double> sample_potential(const PotentialSpec& spec, const Grid& grid);

// Evaluation at an arbitrary point (used by the radial-limit extraction).
double evaluate_potential(const PotentialSpec& spec, const std::array<double, 3>& x, int dim);

// Decomposition V(x) = sum_i v_i(x_i) when the spec is a sum of axis-aligned
// pieces (zero, constant, half_space, nested sums). Returns per-axis 1D
// samples on the grid axis, or nullopt when no such decomposition is found.
std::optional<std::vector<std::vector<double>>>
separable_potential(const PotentialSpec& spec, const Grid& grid);

} // namespace doslab
