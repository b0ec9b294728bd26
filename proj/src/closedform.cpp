#include "doslab/closedform.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace doslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_dim(int dim) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("dimension must be 1, 2, or 3");
}

}  // namespace

double sphere_area(int dim) {
  if (dim < 1) throw std::invalid_argument("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double unit_ball_volume(int dim) { return sphere_area(dim) / dim; }

double free_integrated_dos(int dim, double t, double c) {
  check_dim(dim);
  double u = t - c;
  if (u <= 0.0) return 0.0;
  return sphere_area(dim) / (dim * std::pow(2.0 * kPi, dim)) * std::pow(u, 0.5 * dim);
}

double free_laplace(int dim, double s, double c) {
  check_dim(dim);
  if (s <= 0.0) throw std::invalid_argument("free_laplace: s must be positive");
  return std::pow(4.0 * kPi * s, -0.5 * dim) * std::exp(-s * c);
}

double halfspace_integrated_dos(int dim, double t, double a) {
  return 0.5 * (free_integrated_dos(dim, t, 0.0) + free_integrated_dos(dim, t, a));
}

double halfspace_laplace(int dim, double s, double a) {
  return 0.5 * (free_laplace(dim, s, 0.0) + free_laplace(dim, s, a));
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  int half = (n + 1) / 2;
  for (int k = 0; k < half; ++k) {
    double x = std::cos(kPi * (k + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence: (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}.
      double p0 = 1.0, p1 = x;
      for (int j = 1; j < n; ++j) {
        double p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[k] = -x;
    nodes[n - 1 - k] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[k] = w;
    weights[n - 1 - k] = w;
  }
}

SphereQuadrature sphere_quadrature(int dim, int n) {
  check_dim(dim);
  SphereQuadrature q;
  q.dim = dim;
  if (dim == 1) {
    q.nodes = {{-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    q.weights = {1.0, 1.0};
    return q;
  }
  if (dim == 2) {
    if (n < 4) throw std::invalid_argument("sphere_quadrature: need n >= 4 in d=2");
    q.nodes.reserve(n);
    q.weights.reserve(n);
    for (int j = 0; j < n; ++j) {
      double th = 2.0 * kPi * (j + 0.5) / n;
      q.nodes.push_back({std::cos(th), std::sin(th), 0.0});
      q.weights.push_back(2.0 * kPi / n);
    }
    return q;
  }
  // d = 3: product of Gauss-Legendre in u = cos(theta) and uniform phi.
  int n_polar = n;
  int n_phi = 2 * n;
  std::vector<double> gx, gw;
  gauss_legendre(n_polar, gx, gw);
  q.nodes.reserve(static_cast<std::size_t>(n_polar) * n_phi);
  q.weights.reserve(static_cast<std::size_t>(n_polar) * n_phi);
  for (int i = 0; i < n_polar; ++i) {
    double u = gx[i];
    double st = std::sqrt(std::max(0.0, 1.0 - u * u));
    for (int j = 0; j < n_phi; ++j) {
      double ph = 2.0 * kPi * (j + 0.5) / n_phi;
      q.nodes.push_back({st * std::cos(ph), st * std::sin(ph), u});
      q.weights.push_back(gw[i] * 2.0 * kPi / n_phi);
    }
  }
  return q;
}

double homogeneous_integrated_dos(const AngularFunction& angular,
                                  const SphereQuadrature& quad, double t) {
  int d = quad.dim;
  check_dim(d);
  double acc = 0.0;
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    double u = t - angular(quad.nodes[i]);
    if (u > 0.0) acc += quad.weights[i] * std::pow(u, 0.5 * d);
  }
  return acc / (d * std::pow(2.0 * kPi, d));
}

double homogeneous_laplace(const AngularFunction& angular,
                           const SphereQuadrature& quad, double s) {
  int d = quad.dim;
  check_dim(d);
  if (s <= 0.0) throw std::invalid_argument("homogeneous_laplace: s must be positive");
  double acc = 0.0;
  for (std::size_t i = 0; i < quad.nodes.size(); ++i)
    acc += quad.weights[i] * std::exp(-s * angular(quad.nodes[i]));
  return std::pow(4.0 * kPi * s, -0.5 * d) * acc / sphere_area(d);
}

double homogeneous_integrated_dos(const AngularTable& table,
                                  const SphereQuadrature& quad, double t) {
  return homogeneous_integrated_dos(
      [&table](const std::array<double, 3>& xi) { return table.lookup(xi); }, quad, t);
}

double homogeneous_laplace(const AngularTable& table,
                           const SphereQuadrature& quad, double s) {
  return homogeneous_laplace(
      [&table](const std::array<double, 3>& xi) { return table.lookup(xi); }, quad, s);
}

namespace {

double radial_limit_at(const PotentialSpec& spec, int dim,
                       const std::array<double, 3>& xi, double tol, double r0,
                       int node_index) {
  // Sample V(R xi) at doubling radii; accept when the last three samples
  // agree pairwise within tol.
  constexpr int kMaxDoublings = 44;
  double r = r0;
  double v2 = 0.0, v1 = 0.0, v0 = 0.0;
  int have = 0;
  for (int k = 0; k <= kMaxDoublings; ++k) {
    std::array<double, 3> x = {r * xi[0], r * xi[1], r * xi[2]};
    double v;
    try {
      v = evaluate_potential(spec, x, dim);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "asymptotic_limit_potential: potential not evaluable at radius " << r
          << " before a radial limit emerged (" << e.what()
          << "); the potential is not asymptotically homogeneous";
      throw std::runtime_error(msg.str());
    }
    v2 = v1;
    v1 = v0;
    v0 = v;
    ++have;
    if (have >= 3) {
      double spread = std::max({std::abs(v0 - v1), std::abs(v1 - v2), std::abs(v0 - v2)});
      if (spread < tol) return v0;
    }
    r *= 2.0;
  }
  std::ostringstream msg;
  msg << "asymptotic_limit_potential: no radial limit at node " << node_index
      << " (direction " << xi[0] << ", " << xi[1] << ", " << xi[2]
      << "); samples still move by " << std::abs(v0 - v1) << " after "
      << kMaxDoublings << " doublings of R";
  throw std::runtime_error(msg.str());
}

}  // namespace

AngularTable asymptotic_limit_potential(const PotentialSpec& spec, int dim,
                                        double tol, int n, double r0) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("asymptotic_limit_potential: angular tables support d=2 or d=3");
  if (tol <= 0.0) throw std::invalid_argument("asymptotic_limit_potential: tol must be positive");
  AngularTable table;
  table.dim = dim;
  if (dim == 2) {
    table.n_lat = 0;
    table.values.resize(n);
    for (int j = 0; j < n; ++j) {
      double th = 2.0 * kPi * j / n;
      table.values[j] =
          radial_limit_at(spec, dim, {std::cos(th), std::sin(th), 0.0}, tol, r0, j);
    }
    return table;
  }
  // d = 3: latitude rows theta_i = pi i / (n_lat - 1), longitude columns
  // phi_j = 2 pi j / n_lon, matching AngularTable's bilinear lookup layout.
  int n_lat = std::max(2, n / 8);
  int n_lon = n;
  table.n_lat = n_lat;
  table.values.resize(static_cast<std::size_t>(n_lat) * n_lon);
  for (int i = 0; i < n_lat; ++i) {
    double th = kPi * i / (n_lat - 1);
    double st = std::sin(th), ct = std::cos(th);
    for (int j = 0; j < n_lon; ++j) {
      double ph = 2.0 * kPi * j / n_lon;
      table.values[static_cast<std::size_t>(i) * n_lon + j] = radial_limit_at(
          spec, dim, {st * std::cos(ph), st * std::sin(ph), ct}, tol, r0, i * n_lon + j);
    }
  }
  return table;
}

}  // namespace doslab
