#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doslab/potential.hpp"

namespace doslab {

inline constexpr const char* kVersion = "0.1.0";

// One experiment = one method applied to one declarative setup. A config is
// the unit of reproducibility: the report echoes it together with its hash,
// and rerunning the same config (same seed) regenerates the outputs byte for
// byte. Fields irrelevant to a method keep their defaults and are ignored.
struct ExperimentConfig {
  std::string name = "run";
  // eigencount | heat_bulk | heat_ball | residue | projection | compare |
  // stability | connes | cwikel | abelian | propagator | closedform
  std::string method;

  int dim = 2;
  double half_width = 0.0;
  double spacing = 0.0;
  std::string boundary = "dirichlet";
  PotentialSpec potential;
  PotentialSpec perturbation;  // stability: added on top of potential

  std::vector<double> s_grid;
  std::vector<double> lambda_grid;   // integrated-DOS evaluation energies
  double bin_width = 0.05;

  std::string ball_policy = "route";  // route | stability
  bool lattice_volume = false;

  double ell = 8.0;                  // residue weight scale
  std::vector<double> r_grid;        // residue exponents; empty -> default

  std::vector<double> abelian_r_grid{1.02, 1.04, 1.06, 1.08};
  std::vector<double> abelian_big_r_grid{10.0, 20.0, 40.0};
  std::vector<std::string> fields;   // abelian: one | gauss | lorentz

  std::vector<double> l_grid;        // stability / cwikel box sizes
  std::vector<std::int64_t> n_grid;  // connes partial-sum cutoffs
  double sigma_frac = 0.55;          // connes bump width as a fraction of L

  int cwikel_p = 1;
  double z_re = 0.0;
  double z_im = 1.0;

  double window_a = 0.0;             // projection window [a, b)
  double window_b = 0.0;

  std::string diag_mode = "exact";   // exact | stochastic
  int probes = 64;
  std::uint64_t seed = 1;
  std::int64_t dense_cap = 5000;
  std::int64_t column_budget = 4096;
  double cheb_tol = 1e-10;

  double tolerance = 0.0;            // 0 disables pass/fail gating
  std::vector<double> check_s;       // gate only these s (empty: all gated)
};

// Canonical JSON with alphabetically ordered keys; parsing rejects unknown
// keys so typos fail loudly instead of silently using defaults.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

// FNV-1a over the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

// Named fixtures, each reproducing one acceptance-style experiment.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace doslab
