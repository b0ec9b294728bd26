#pragma once

#include <array>
#include <functional>
#include <vector>

#include "doslab/potential.hpp"

namespace doslab {

// Surface measure of the unit sphere S^{d-1} in R^d: 2 pi^{d/2} / Gamma(d/2).
double sphere_area(int dim);

// Volume of the unit ball, sphere_area(d) / d.
double unit_ball_volume(int dim);

// Integrated density of states of -Delta + c at energy t:
//   omega_d / (d (2 pi)^d) * (t - c)_+^{d/2}.
double free_integrated_dos(int dim, double t, double c = 0.0);

// Laplace transform of the free DOS shifted by c: (4 pi s)^{-d/2} e^{-s c}.
// Rejects s <= 0.
double free_laplace(int dim, double s, double c = 0.0);

// Exact two-value averages for a half-space step potential of height a
// (the angular limit takes the value a on half the sphere and 0 on the rest).
double halfspace_integrated_dos(int dim, double t, double a);
double halfspace_laplace(int dim, double s, double a);

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on the Legendre recurrence. Exact for polynomials of degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Quadrature rule on the unit sphere S^{d-1}. Weights sum to sphere_area(dim).
//   d = 1: the two points {-1, +1}, weight 1 each.
//   d = 2: n offset-uniform angles theta_j = 2 pi (j + 1/2) / n. Choosing n
//          divisible by 4 places nodes symmetrically about the vertical axis,
//          which keeps half-space style discontinuities balanced.
//   d = 3: Gauss-Legendre in cos(theta) crossed with offset-uniform phi.
struct SphereQuadrature {
  int dim = 0;
  std::vector<std::array<double, 3>> nodes;
  std::vector<double> weights;
};

SphereQuadrature sphere_quadrature(int dim, int n = 64);

using AngularFunction = std::function<double(const std::array<double, 3>&)>;

// Integrated DOS for -Delta + V with V positively homogeneous of degree zero,
// determined by its restriction to the sphere:
//   (1 / (d (2 pi)^d)) Integral_{S^{d-1}} (t - V(xi))_+^{d/2} dxi.
double homogeneous_integrated_dos(const AngularFunction& angular,
                                  const SphereQuadrature& quad, double t);

// Laplace transform of the same measure:
//   (4 pi s)^{-d/2} * (1 / omega_d) Integral_{S^{d-1}} e^{-s V(xi)} dxi.
double homogeneous_laplace(const AngularFunction& angular,
                           const SphereQuadrature& quad, double s);

// Convenience overloads evaluating a sampled angular table.
double homogeneous_integrated_dos(const AngularTable& table,
                                  const SphereQuadrature& quad, double t);
double homogeneous_laplace(const AngularTable& table,
                           const SphereQuadrature& quad, double s);

// Radial limit V_infinity(xi) = lim_{R -> inf} V(R xi), sampled on a sphere
// grid by doubling R until three consecutive samples agree within tol.
// Throws if some direction fails to settle (e.g. V oscillates radially),
// naming the offending node.
AngularTable asymptotic_limit_potential(const PotentialSpec& spec, int dim,
                                        double tol = 1e-8, int n = 256,
                                        double r0 = 8.0);

}  // namespace doslab
