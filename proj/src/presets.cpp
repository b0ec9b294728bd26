#include <cmath>
#include <stdexcept>

#include "doslab/config.hpp"

namespace doslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

PotentialSpec zero_potential() { return PotentialSpec{}; }

PotentialSpec constant_potential(double v) {
  PotentialSpec s;
  s.kind = "constant";
  s.constant_value = v;
  return s;
}

PotentialSpec halfspace_potential(double level) {
  PotentialSpec s;
  s.kind = "half_space";
  s.half_space_level = level;
  s.half_space_axis = 1;
  s.half_space_sign = +1;
  return s;
}

PotentialSpec origin_bump(double amplitude, double radius) {
  PotentialSpec s;
  s.kind = "bump";
  s.bump_amplitude = amplitude;
  s.bump_radius = radius;
  s.bump_profile = "gaussian";
  return s;
}

ExperimentConfig route_compare(const std::string& name, const PotentialSpec& pot) {
  ExperimentConfig c;
  c.name = name;
  c.method = "compare";
  c.dim = 2;
  c.half_width = 40.0;
  c.spacing = 0.3125;
  c.boundary = "dirichlet";  // heat routes; the eigencount side runs periodic
  c.potential = pot;
  c.s_grid = {1.0, 2.0};
  c.ball_policy = "route";
  c.ell = 8.0;
  c.tolerance = 0.05;
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"example1-free",   "free-eigencount",     "thm-homogeneous",
          "route-compare-free", "route-compare-const1", "route-compare-halfspace",
          "thm-stability",   "abelian-check",       "connes-check",
          "cwikel-check",    "propagator-oracle",   "asymptotic-homogeneous"};
}

ExperimentConfig preset(const std::string& name) {
  if (name == "example1-free") {
    // Free heat diagonal in the bulk vs (4 pi s)^{-1}.
    ExperimentConfig c;
    c.name = name;
    c.method = "heat_bulk";
    c.dim = 2;
    c.half_width = 16.0;
    c.spacing = 0.25;
    c.boundary = "dirichlet";
    c.potential = zero_potential();
    c.s_grid = {0.5, 1.0, 2.0};
    c.check_s = {1.0};  // h^2/(16 s) dispersion error per axis: only s >= 1 fits 1%
    c.tolerance = 0.01;
    return c;
  }
  if (name == "free-eigencount") {
    ExperimentConfig c;
    c.name = name;
    c.method = "eigencount";
    c.dim = 2;
    c.half_width = 20.0;
    c.spacing = 0.25;
    c.boundary = "periodic";
    c.potential = zero_potential();
    c.lambda_grid = {1.0, 2.0, 4.0};
    c.tolerance = 0.03;
    return c;
  }
  if (name == "thm-homogeneous") {
    ExperimentConfig c;
    c.name = name;
    c.method = "eigencount";
    c.dim = 2;
    c.half_width = 20.0;
    c.spacing = 0.25;
    c.boundary = "periodic";
    c.potential = halfspace_potential(2.0);
    c.lambda_grid = {1.0, 3.0};
    c.tolerance = 0.05;
    return c;
  }
  if (name == "route-compare-free") return route_compare(name, zero_potential());
  if (name == "route-compare-const1") return route_compare(name, constant_potential(1.0));
  if (name == "route-compare-halfspace") return route_compare(name, halfspace_potential(2.0));
  if (name == "thm-stability") {
    ExperimentConfig c;
    c.name = name;
    c.method = "stability";
    c.dim = 2;
    c.spacing = 0.3125;
    c.boundary = "dirichlet";
    c.potential = halfspace_potential(2.0);
    c.perturbation = origin_bump(5.0, 2.0);
    c.l_grid = {10.0, 20.0, 40.0};
    c.s_grid = {1.0, 2.0};
    c.ball_policy = "stability";
    c.tolerance = 0.01;
    return c;
  }
  if (name == "abelian-check") {
    ExperimentConfig c;
    c.name = name;
    c.method = "abelian";
    c.dim = 2;
    c.fields = {"one", "gauss", "lorentz"};
    c.tolerance = 0.02;
    return c;
  }
  if (name == "connes-check") {
    ExperimentConfig c;
    c.name = name;
    c.method = "connes";
    c.dim = 2;
    c.half_width = 0.9;
    c.spacing = 2.0 * 0.9 / 64.0;
    c.boundary = "periodic";
    c.sigma_frac = 0.55;
    c.n_grid = {24, 30, 36, 45, 55, 68, 84, 104, 128, 158, 195, 240};
    c.dense_cap = 4096;
    c.tolerance = 0.10;
    return c;
  }
  if (name == "cwikel-check") {
    ExperimentConfig c;
    c.name = name;
    c.method = "cwikel";
    c.dim = 2;
    c.spacing = 0.5;
    c.boundary = "dirichlet";
    c.potential = zero_potential();
    c.l_grid = {6.0, 12.0, 24.0};
    c.cwikel_p = 1;
    c.z_re = 0.0;
    c.z_im = 1.0;
    c.tolerance = 0.15;  // allowed quasinorm growth per doubling of L
    return c;
  }
  if (name == "propagator-oracle") {
    ExperimentConfig c;
    c.name = name;
    c.method = "propagator";
    c.dim = 1;
    c.half_width = 50.0;
    c.spacing = 0.5;
    c.boundary = "periodic";
    PotentialSpec p;
    p.kind = "random";
    p.random_seed = 12345;
    p.random_amplitude = 1.0;
    p.random_cell = 0.5;
    c.potential = p;
    c.s_grid = {1.0};
    c.cheb_tol = 1e-10;
    c.tolerance = 1e-8;
    return c;
  }
  if (name == "asymptotic-homogeneous") {
    // A homogeneous potential plus a decaying bump: the radial-limit
    // extraction recovers the angular profile, and the closed forms follow.
    ExperimentConfig c;
    c.name = name;
    c.method = "closedform";
    c.dim = 2;
    PotentialSpec hom;
    hom.kind = "homogeneous";
    hom.angular.dim = 2;
    hom.angular.values.resize(64);
    for (int j = 0; j < 64; ++j)
      hom.angular.values[j] = 1.0 + 0.5 * std::cos(2.0 * kPi * j / 64.0);
    PotentialSpec sum;
    sum.kind = "sum";
    sum.terms = {hom, origin_bump(3.0, 2.0)};
    c.potential = sum;
    c.lambda_grid = {1.0, 2.0, 4.0};
    c.s_grid = {0.5, 1.0, 2.0};
    return c;
  }
  std::string msg = "unknown preset '" + name + "'; available presets:";
  for (const auto& n : preset_names()) msg += " " + n;
  throw std::invalid_argument(msg);
}

}  // namespace doslab
