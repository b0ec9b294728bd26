#include "doslab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "doslab/chebyshev.hpp"
#include "doslab/closedform.hpp"
#include "doslab/dos.hpp"
#include "doslab/heat.hpp"
#include "doslab/rng.hpp"
#include "doslab/spectral.hpp"

namespace doslab {

namespace {

using json = nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void add_check(RunResult& res, std::string label, double value, double reference,
               double deviation, double tolerance) {
  CheckLine line;
  line.label = std::move(label);
  line.value = value;
  line.reference = reference;
  line.deviation = deviation;
  line.tolerance = tolerance;
  line.pass = deviation <= tolerance;
  res.pass = res.pass && line.pass;
  res.checks.push_back(std::move(line));
}

bool s_is_gated(const ExperimentConfig& c, double s) {
  if (c.tolerance <= 0.0) return false;
  if (c.check_s.empty()) return true;
  for (double g : c.check_s)
    if (std::abs(g - s) < 1e-12) return true;
  return false;
}

double rel_dev(double a, double b) {
  double scale = 0.5 * (std::abs(a) + std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

Grid grid_from(const ExperimentConfig& c) {
  return build_grid(c.dim, c.half_width, c.spacing, boundary_from_string(c.boundary));
}

std::optional<double> closed_laplace(const PotentialSpec& p, int dim, double s) {
  if (p.kind == "zero") return free_laplace(dim, s);
  if (p.kind == "constant") return free_laplace(dim, s, p.constant_value);
  if (p.kind == "half_space") return halfspace_laplace(dim, s, p.half_space_level);
  if (p.kind == "homogeneous")
    return homogeneous_laplace(p.angular, sphere_quadrature(dim, dim == 3 ? 32 : 256), s);
  return std::nullopt;
}

std::optional<double> closed_integrated(const PotentialSpec& p, int dim, double t) {
  if (p.kind == "zero") return free_integrated_dos(dim, t);
  if (p.kind == "constant") return free_integrated_dos(dim, t, p.constant_value);
  if (p.kind == "half_space") return halfspace_integrated_dos(dim, t, p.half_space_level);
  if (p.kind == "homogeneous")
    return homogeneous_integrated_dos(p.angular, sphere_quadrature(dim, dim == 3 ? 32 : 256), t);
  return std::nullopt;
}

DiagonalOptions diag_options(const ExperimentConfig& c, const Grid& grid,
                             const PotentialSpec& spec) {
  DiagonalOptions opt;
  opt.mode = c.diag_mode;
  opt.probes = c.probes;
  opt.seed = c.seed;
  opt.dense_cap = c.dense_cap;
  opt.column_budget = c.column_budget;
  if (auto axes = separable_potential(spec, grid)) opt.axis_potentials = *axes;
  return opt;
}

// ---------------------------------------------------------------------------

void run_eigencount(const ExperimentConfig& c, RunResult& res, json& results) {
  Grid grid = grid_from(c);
  std::vector<double> v = sample_potential(c.potential, grid);
  SparseOperator op = assemble_hamiltonian(grid, v);
  auto axes = separable_potential(c.potential, grid);
  const std::vector<std::vector<double>>* axp = axes ? &*axes : nullptr;
  double vmax = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());

  if (!c.lambda_grid.empty()) {
    std::vector<double> vals = integrated_eigencount(op, c.lambda_grid, c.dense_cap, axp);
    std::string csv = "lambda,value,reference,rel_error\n";
    json rows = json::array();
    for (std::size_t i = 0; i < c.lambda_grid.size(); ++i) {
      double lam = c.lambda_grid[i];
      auto ref = closed_integrated(c.potential, c.dim, lam);
      double dev = ref && *ref != 0.0 ? std::abs(vals[i] - *ref) / std::abs(*ref) : 0.0;
      csv += fmt(lam) + "," + fmt(vals[i]) + "," + (ref ? fmt(*ref) : "") + "," +
             (ref ? fmt(dev) : "") + "\n";
      rows.push_back({{"lambda", lam},
                      {"value", vals[i]},
                      {"reference", ref ? json(*ref) : json()},
                      {"rel_error", ref ? json(dev) : json()}});
      if (ref && c.tolerance > 0.0)
        add_check(res, "integrated DOS at lambda=" + fmt(lam), vals[i], *ref, dev, c.tolerance);
    }
    res.csv_files[c.name + "_integrated.csv"] = csv;
    results["integrated"] = rows;
  }

  if (!c.s_grid.empty()) {
    double smin = *std::min_element(c.s_grid.begin(), c.s_grid.end());
    std::vector<double> edges = uniform_bin_edges(laplace_lambda_max(smin, vmax), c.bin_width);
    DOSHistogram hist = eigencount_dos(op, edges, c.dense_cap, axp);
    LaplaceCurve lap = laplace_of_histogram(hist, c.s_grid, vmax);

    std::string hcsv = "bin_lo,bin_hi,count,density,outside_window\n";
    for (std::size_t b = 0; b < hist.counts.size(); ++b)
      hcsv += fmt(hist.bin_edges[b]) + "," + fmt(hist.bin_edges[b + 1]) + "," +
              fmt(hist.counts[b]) + "," + fmt(hist.density[b]) + "," +
              std::to_string(int(hist.outside_window[b])) + "\n";
    res.csv_files[c.name + "_histogram.csv"] = hcsv;

    std::string lcsv = "s,value,reference,rel_error,tail_bound,flagged\n";
    json rows = json::array();
    for (std::size_t i = 0; i < c.s_grid.size(); ++i) {
      double s = c.s_grid[i];
      auto ref = closed_laplace(c.potential, c.dim, s);
      double dev = ref && *ref != 0.0 ? std::abs(lap.values[i] - *ref) / std::abs(*ref) : 0.0;
      lcsv += fmt(s) + "," + fmt(lap.values[i]) + "," + (ref ? fmt(*ref) : "") + "," +
              (ref ? fmt(dev) : "") + "," + fmt(lap.tail_bounds[i]) + "," +
              std::to_string(int(lap.flagged[i])) + "\n";
      rows.push_back({{"s", s},
                      {"value", lap.values[i]},
                      {"reference", ref ? json(*ref) : json()},
                      {"tail_bound", lap.tail_bounds[i]}});
      if (ref && s_is_gated(c, s))
        add_check(res, "eigencount Laplace at s=" + fmt(s), lap.values[i], *ref, dev,
                  c.tolerance);
    }
    res.csv_files[c.name + "_laplace.csv"] = lcsv;
    results["laplace"] = rows;
    results["histogram_strategy"] = hist.strategy;
    results["window"] = {hist.window[0], hist.window[1]};
  }
}

// ---------------------------------------------------------------------------

void run_heat_bulk(const ExperimentConfig& c, RunResult& res, json& results) {
  Grid grid = grid_from(c);
  std::vector<double> v = sample_potential(c.potential, grid);
  SparseOperator op = assemble_hamiltonian(grid, v);
  DiagonalOptions opt = diag_options(c, grid, c.potential);

  std::string csv = "s,value,reference,rel_error,bulk_points,strategy\n";
  json rows = json::array();
  for (double s : c.s_grid) {
    double b = grid.half_width - boundary_margin(s);
    if (b <= 0.0)
      throw std::invalid_argument("heat_bulk: boundary margin 6*sqrt(s) leaves no bulk; "
                                  "increase L or decrease s");
    HeatPropagator prop = build_propagator(op, s, c.cheb_tol);
    DiagonalField diag = heat_diagonal(prop, opt);
    double acc = 0.0;
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < grid.size(); ++i) {
      auto x = grid.point(i);
      bool in_bulk = true;
      for (int ax = 0; ax < grid.dim; ++ax) in_bulk = in_bulk && std::abs(x[ax]) <= b;
      if (!in_bulk) continue;
      acc += diag.values[i];
      ++count;
    }
    double value = acc / static_cast<double>(count);
    auto ref = closed_laplace(c.potential, c.dim, s);
    double dev = ref && *ref != 0.0 ? std::abs(value - *ref) / std::abs(*ref) : 0.0;
    csv += fmt(s) + "," + fmt(value) + "," + (ref ? fmt(*ref) : "") + "," +
           (ref ? fmt(dev) : "") + "," + std::to_string(count) + "," + diag.strategy + "\n";
    rows.push_back({{"s", s},
                    {"value", value},
                    {"reference", ref ? json(*ref) : json()},
                    {"bulk_points", count},
                    {"strategy", diag.strategy}});
    if (ref && s_is_gated(c, s))
      add_check(res, "bulk heat diagonal at s=" + fmt(s), value, *ref, dev, c.tolerance);
  }
  res.csv_files[c.name + "_bulk.csv"] = csv;
  results["bulk"] = rows;
}

// ---------------------------------------------------------------------------

void run_heat_ball(const ExperimentConfig& c, RunResult& res, json& results) {
  Grid grid = grid_from(c);
  std::vector<double> v = sample_potential(c.potential, grid);
  SparseOperator op = assemble_hamiltonian(grid, v);
  DiagonalOptions opt = diag_options(c, grid, c.potential);

  std::string rcsv = "s,R,value,stderr\n";
  std::string scsv = "s,estimate,stderr,reference,rel_error,strategy\n";
  json rows = json::array();
  for (double s : c.s_grid) {
    std::vector<double> radii = ball_policy_radii(grid.half_width, s, c.ball_policy);
    HeatPropagator prop = build_propagator(op, s, c.cheb_tol);
    DiagonalField diag = heat_diagonal(prop, opt);
    BallAverage ball = ball_average(grid, diag, radii, c.lattice_volume);
    for (std::size_t k = 0; k < radii.size(); ++k)
      rcsv += fmt(s) + "," + fmt(radii[k]) + "," + fmt(ball.values[k]) + "," +
              fmt(ball.stderr_values[k]) + "\n";
    auto ref = closed_laplace(c.potential, c.dim, s);
    double dev = ref && *ref != 0.0 ? std::abs(ball.estimate - *ref) / std::abs(*ref) : 0.0;
    scsv += fmt(s) + "," + fmt(ball.estimate) + "," + fmt(ball.stderr_value) + "," +
            (ref ? fmt(*ref) : "") + "," + (ref ? fmt(dev) : "") + "," + diag.strategy + "\n";
    rows.push_back({{"s", s},
                    {"estimate", ball.estimate},
                    {"reference", ref ? json(*ref) : json()},
                    {"strategy", diag.strategy}});
    if (ref && s_is_gated(c, s))
      add_check(res, "ball-average Laplace at s=" + fmt(s), ball.estimate, *ref, dev,
                c.tolerance);
  }
  res.csv_files[c.name + "_ball.csv"] = rcsv;
  res.csv_files[c.name + "_ball_summary.csv"] = scsv;
  results["ball"] = rows;
}

// ---------------------------------------------------------------------------

void run_residue(const ExperimentConfig& c, RunResult& res, json& results) {
  Grid grid = grid_from(c);
  std::vector<double> v = sample_potential(c.potential, grid);
  SparseOperator op = assemble_hamiltonian(grid, v);
  DiagonalOptions opt = diag_options(c, grid, c.potential);
  std::vector<double> rg = c.r_grid.empty() ? residue_r_grid(c.dim, c.half_width) : c.r_grid;

  std::string rcsv = "s,r,scaled_raw,scaled_norm\n";
  std::string scsv = "s,laplace_estimate,dixmier_value,fit_residual,reference,rel_error\n";
  json rows = json::array();
  for (double s : c.s_grid) {
    HeatPropagator prop = build_propagator(op, s, c.cheb_tol);
    DiagonalField diag = heat_diagonal(prop, opt);
    ResidueFit fit = residue_route(grid, diag, s, rg, c.ell);
    for (std::size_t k = 0; k < rg.size(); ++k)
      rcsv += fmt(s) + "," + fmt(rg[k]) + "," + fmt(fit.scaled_raw[k]) + "," +
              fmt(fit.scaled_norm[k]) + "\n";
    auto ref = closed_laplace(c.potential, c.dim, s);
    double dev = ref && *ref != 0.0
                     ? std::abs(fit.laplace_estimate - *ref) / std::abs(*ref)
                     : 0.0;
    scsv += fmt(s) + "," + fmt(fit.laplace_estimate) + "," + fmt(fit.dixmier_value) + "," +
            fmt(fit.fit_residual) + "," + (ref ? fmt(*ref) : "") + "," +
            (ref ? fmt(dev) : "") + "\n";
    rows.push_back({{"s", s},
                    {"laplace_estimate", fit.laplace_estimate},
                    {"dixmier_value", fit.dixmier_value},
                    {"reference", ref ? json(*ref) : json()}});
    if (ref && s_is_gated(c, s))
      add_check(res, "residue Laplace at s=" + fmt(s), fit.laplace_estimate, *ref, dev,
                c.tolerance);
  }
  res.csv_files[c.name + "_residue.csv"] = rcsv;
  res.csv_files[c.name + "_residue_summary.csv"] = scsv;
  results["residue"] = rows;
  results["r_grid"] = rg;
}

// ---------------------------------------------------------------------------

void run_projection(const ExperimentConfig& c, RunResult& res, json& results) {
  Grid grid = grid_from(c);
  std::vector<double> v = sample_potential(c.potential, grid);
  SparseOperator op = assemble_hamiltonian(grid, v);
  if (!(c.window_b > c.window_a))
    throw std::invalid_argument("projection: need window_a < window_b");
  double s_proxy = 1.0 / (c.window_b - c.window_a);
  std::vector<double> radii = ball_policy_radii(grid.half_width, s_proxy, c.ball_policy);
  ProjectionDOS proj = projection_dos(op, c.window_a, c.window_b, radii, c.dense_cap);

  std::string csv = "R,value,boundary_flag\n";
  for (std::size_t k = 0; k < proj.radii.size(); ++k)
    csv += fmt(proj.radii[k]) + "," + fmt(proj.values[k]) + "," +
           std::to_string(int(proj.boundary_flag[k])) + "\n";
  res.csv_files[c.name + "_projection.csv"] = csv;

  double mean = std::accumulate(proj.values.begin(), proj.values.end(), 0.0) /
                static_cast<double>(proj.values.size());
  auto ra = closed_integrated(c.potential, c.dim, c.window_a);
  auto rb = closed_integrated(c.potential, c.dim, c.window_b);
  results["projection"] = {{"a", c.window_a},
                           {"b", c.window_b},
                           {"mean", mean},
                           {"count_normalized", proj.count_normalized}};
  if (ra && rb && c.tolerance > 0.0) {
    double ref = *rb - *ra;
    double dev = ref != 0.0 ? std::abs(mean - ref) / std::abs(ref) : 0.0;
    add_check(res, "projection DOS on window", mean, ref, dev, c.tolerance);
  }
}

// ---------------------------------------------------------------------------

void run_compare(const ExperimentConfig& c, RunResult& res, json& results) {
  // Heat-based routes want a boundary the semigroup respects (Dirichlet box);
  // eigenvalue counts converge much faster on the torus. Each route runs on
  // its natural truncation of the same (L, h).
  Grid grid_heat = build_grid(c.dim, c.half_width, c.spacing, Boundary::dirichlet);
  Grid grid_count = build_grid(c.dim, c.half_width, c.spacing, Boundary::periodic);

  std::vector<double> vh = sample_potential(c.potential, grid_heat);
  std::vector<double> vc = sample_potential(c.potential, grid_count);
  SparseOperator op_heat = assemble_hamiltonian(grid_heat, vh);
  SparseOperator op_count = assemble_hamiltonian(grid_count, vc);
  auto axes_count = separable_potential(c.potential, grid_count);
  const std::vector<std::vector<double>>* axp = axes_count ? &*axes_count : nullptr;
  DiagonalOptions opt = diag_options(c, grid_heat, c.potential);
  double vmax = vc.empty() ? 0.0 : *std::max_element(vc.begin(), vc.end());

  double smin = *std::min_element(c.s_grid.begin(), c.s_grid.end());
  std::vector<double> edges = uniform_bin_edges(laplace_lambda_max(smin, vmax), c.bin_width);
  DOSHistogram hist = eigencount_dos(op_count, edges, c.dense_cap, axp);
  LaplaceCurve lap = laplace_of_histogram(hist, c.s_grid, vmax);

  std::vector<double> rg = c.r_grid.empty() ? residue_r_grid(c.dim, c.half_width) : c.r_grid;

  std::string csv = "s,eigencount,ball,residue,closedform,max_pairwise_rel\n";
  json rows = json::array();
  for (std::size_t i = 0; i < c.s_grid.size(); ++i) {
    double s = c.s_grid[i];
    HeatPropagator prop = build_propagator(op_heat, s, c.cheb_tol);
    DiagonalField diag = heat_diagonal(prop, opt);
    BallAverage ball =
        ball_average(grid_heat, diag, ball_policy_radii(c.half_width, s, "route"));
    ResidueFit fit = residue_route(grid_heat, diag, s, rg, c.ell);

    double e = lap.values[i], b = ball.estimate, r = fit.laplace_estimate;
    double maxdev = std::max({rel_dev(e, b), rel_dev(e, r), rel_dev(b, r)});
    auto ref = closed_laplace(c.potential, c.dim, s);
    csv += fmt(s) + "," + fmt(e) + "," + fmt(b) + "," + fmt(r) + "," +
           (ref ? fmt(*ref) : "") + "," + fmt(maxdev) + "\n";
    rows.push_back({{"s", s},
                    {"eigencount", e},
                    {"ball", b},
                    {"residue", r},
                    {"closedform", ref ? json(*ref) : json()},
                    {"max_pairwise_rel", maxdev}});
    if (s_is_gated(c, s))
      add_check(res, "route agreement at s=" + fmt(s), maxdev, 0.0, maxdev, c.tolerance);
  }
  res.csv_files[c.name + "_compare.csv"] = csv;
  results["compare"] = rows;
  results["r_grid"] = rg;
}

// ---------------------------------------------------------------------------

void run_stability(const ExperimentConfig& c, RunResult& res, json& results) {
  if (c.perturbation.kind == "zero")
    throw std::invalid_argument("stability: config needs a non-zero perturbation");
  if (c.l_grid.size() < 2)
    throw std::invalid_argument("stability: need at least two box sizes in l_grid");
  for (std::size_t i = 1; i < c.l_grid.size(); ++i)
    if (c.l_grid[i] <= c.l_grid[i - 1])
      throw std::invalid_argument("stability: l_grid must increase");

  PotentialSpec perturbed;
  perturbed.kind = "sum";
  perturbed.terms = {c.potential, c.perturbation};

  // rel_diff[s index][L index]
  std::vector<std::vector<double>> rel(c.s_grid.size(),
                                       std::vector<double>(c.l_grid.size(), 0.0));
  std::string csv = "L,s,base,perturbed,rel_diff\n";
  json rows = json::array();
  for (std::size_t li = 0; li < c.l_grid.size(); ++li) {
    double L = c.l_grid[li];
    Grid grid = build_grid(c.dim, L, c.spacing, boundary_from_string(c.boundary));
    std::vector<double> v0 = sample_potential(c.potential, grid);
    std::vector<double> v1 = sample_potential(perturbed, grid);
    SparseOperator op0 = assemble_hamiltonian(grid, v0);
    SparseOperator op1 = assemble_hamiltonian(grid, v1);
    DiagonalOptions opt0 = diag_options(c, grid, c.potential);
    DiagonalOptions opt1 = diag_options(c, grid, perturbed);
    for (std::size_t si = 0; si < c.s_grid.size(); ++si) {
      double s = c.s_grid[si];
      std::vector<double> radii = ball_policy_radii(L, s, c.ball_policy);
      HeatPropagator p0 = build_propagator(op0, s, c.cheb_tol);
      HeatPropagator p1 = build_propagator(op1, s, c.cheb_tol);
      BallAverage b0 = ball_average(grid, heat_diagonal(p0, opt0), radii);
      BallAverage b1 = ball_average(grid, heat_diagonal(p1, opt1), radii);
      double d = std::abs(b1.estimate - b0.estimate) / b0.estimate;
      rel[si][li] = d;
      csv += fmt(L) + "," + fmt(s) + "," + fmt(b0.estimate) + "," + fmt(b1.estimate) + "," +
             fmt(d) + "\n";
      rows.push_back({{"L", L},
                      {"s", s},
                      {"base", b0.estimate},
                      {"perturbed", b1.estimate},
                      {"rel_diff", d}});
    }
  }
  res.csv_files[c.name + "_stability.csv"] = csv;
  results["stability"] = rows;

  if (c.tolerance > 0.0) {
    for (std::size_t si = 0; si < c.s_grid.size(); ++si) {
      double s = c.s_grid[si];
      add_check(res, "perturbation effect at largest box, s=" + fmt(s), rel[si].back(), 0.0,
                rel[si].back(), c.tolerance);
      double worst_increase = 0.0;
      for (std::size_t li = 1; li < c.l_grid.size(); ++li)
        worst_increase = std::max(worst_increase, rel[si][li] - rel[si][li - 1]);
      add_check(res, "effect decreases with box size, s=" + fmt(s), worst_increase, 0.0,
                worst_increase, 1e-12);
    }
  }
}

// ---------------------------------------------------------------------------

void run_connes(const ExperimentConfig& c, RunResult& res, json& results) {
  if (c.dim != 2) throw std::invalid_argument("connes: the bump fixture is d=2 only");
  Grid grid = grid_from(c);
  if (grid.boundary != Boundary::periodic)
    throw std::invalid_argument("connes: needs a periodic grid");
  int n = grid.n_per_axis;
  std::int64_t N = grid.size();
  double L = grid.half_width, h = grid.spacing;

  // Smooth positive bump on the torus: a periodized gaussian of width
  // sigma_frac * L, normalized to discrete integral one.
  double sigma = c.sigma_frac * L;
  std::vector<double> f(N, 0.0);
  for (std::int64_t i = 0; i < N; ++i) {
    auto x = grid.point(i);
    double acc = 0.0;
    for (int m1 = -2; m1 <= 2; ++m1)
      for (int m2 = -2; m2 <= 2; ++m2) {
        double dx = x[0] + 2.0 * L * m1;
        double dy = x[1] + 2.0 * L * m2;
        acc += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      }
    f[i] = acc;
  }
  double mass = std::accumulate(f.begin(), f.end(), 0.0) * h * h;
  for (double& fi : f) fi /= mass;  // now h^2 * sum f = 1

  std::vector<double> a = connes_operator(grid, f, c.dense_cap);
  std::vector<double> mu = dense_singular_values(std::move(a), N, N);
  DixmierSummary dix = dixmier_partial_sums(mu, c.n_grid);

  double target = 1.0 / (4.0 * 3.14159265358979323846);  // integral of f / (4 pi)

  std::string csv = "N,partial_sum,abs_dev\n";
  for (std::size_t k = 0; k < dix.n_grid.size(); ++k)
    csv += std::to_string(dix.n_grid[k]) + "," + fmt(dix.partial[k]) + "," +
           fmt(std::abs(dix.partial[k] - target)) + "\n";
  res.csv_files[c.name + "_connes.csv"] = csv;

  results["connes"] = {{"target", target},
                       {"extrapolated", dix.extrapolated},
                       {"partial", dix.partial},
                       {"richardson", dix.richardson},
                       {"leading_singular_values",
                        std::vector<double>(mu.begin(), mu.begin() + std::min<std::size_t>(8, mu.size()))}};

  if (c.tolerance > 0.0) {
    double dev = std::abs(dix.extrapolated - target) / target;
    add_check(res, "Dixmier extrapolation vs integral of f/(4 pi)", dix.extrapolated, target,
              dev, c.tolerance);
    // Trend over the last decade of N: |S_N - target| must not increase.
    std::int64_t nmax = dix.n_grid.back();
    double worst = 0.0;
    double prev = -1.0;
    for (std::size_t k = 0; k < dix.n_grid.size(); ++k) {
      if (dix.n_grid[k] * 10 < nmax) continue;
      double dev_k = std::abs(dix.partial[k] - target);
      if (prev >= 0.0) worst = std::max(worst, dev_k - prev);
      prev = dev_k;
    }
    add_check(res, "partial sums trend toward target over last decade", worst, 0.0, worst,
              1e-12);
  }
}

// ---------------------------------------------------------------------------

void run_cwikel(const ExperimentConfig& c, RunResult& res, json& results) {
  if (c.l_grid.empty()) throw std::invalid_argument("cwikel: l_grid must not be empty");
  double q = static_cast<double>(c.dim) / c.cwikel_p;  // weak Schatten order

  std::string csv = "L,n_points,quasinorm,argmax\n";
  json rows = json::array();
  std::vector<double> qns;
  for (double L : c.l_grid) {
    Grid grid = build_grid(c.dim, L, c.spacing, boundary_from_string(c.boundary));
    std::vector<double> v = sample_potential(c.potential, grid);
    SparseOperator op = assemble_hamiltonian(grid, v);
    std::vector<double> w(grid.size());
    for (std::int64_t i = 0; i < grid.size(); ++i) {
      auto x = grid.point(i);
      w[i] = 1.0 / std::sqrt(1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    }
    std::vector<double> mu =
        cwikel_singular_values(op, w, c.cwikel_p, c.z_re, c.z_im, c.dense_cap);
    WeakQuasinorm qn = weak_quasinorm(mu, q);
    qns.push_back(qn.value);
    csv += fmt(L) + "," + std::to_string(grid.size()) + "," + fmt(qn.value) + "," +
           std::to_string(qn.argmax) + "\n";
    rows.push_back({{"L", L}, {"quasinorm", qn.value}, {"argmax", qn.argmax}});
  }
  res.csv_files[c.name + "_cwikel.csv"] = csv;
  results["cwikel"] = {{"order", q}, {"rows", rows}};

  if (c.tolerance > 0.0) {
    for (std::size_t i = 1; i < qns.size(); ++i) {
      double growth = qns[i] / qns[i - 1] - 1.0;
      add_check(res,
                "quasinorm growth L=" + fmt(c.l_grid[i - 1]) + " -> " + fmt(c.l_grid[i]),
                qns[i], qns[i - 1], growth, c.tolerance);
    }
  }
}

// ---------------------------------------------------------------------------

FieldFunction named_field(const std::string& name) {
  if (name == "one") return [](const std::array<double, 3>&) { return 1.0; };
  if (name == "gauss")
    return [](const std::array<double, 3>& x) {
      return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    };
  if (name == "lorentz")
    return [](const std::array<double, 3>& x) {
      return 1.0 / (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    };
  throw std::invalid_argument("abelian: unknown field '" + name +
                              "' (available: one, gauss, lorentz)");
}

void run_abelian(const ExperimentConfig& c, RunResult& res, json& results) {
  if (c.fields.empty()) throw std::invalid_argument("abelian: fields must not be empty");
  std::string csv = "field,side,x,value\n";
  json rows = json::array();
  for (const std::string& name : c.fields) {
    AbelianReport rep = abelian_check(named_field(name), c.dim, c.abelian_r_grid,
                                      c.abelian_big_r_grid);
    for (std::size_t i = 0; i < rep.r_grid.size(); ++i)
      csv += name + ",right," + fmt(rep.r_grid[i]) + "," + fmt(rep.rights[i]) + "\n";
    for (std::size_t i = 0; i < rep.R_grid.size(); ++i)
      csv += name + ",left," + fmt(rep.R_grid[i]) + "," + fmt(rep.lefts[i]) + "\n";
    rows.push_back({{"field", name},
                    {"left", rep.left_extrapolated},
                    {"right", rep.right_extrapolated},
                    {"discrepancy", rep.discrepancy}});
    if (c.tolerance > 0.0) {
      double scale = std::max({1.0, std::abs(rep.left_extrapolated),
                               std::abs(rep.right_extrapolated)});
      add_check(res, "abelian agreement for field '" + name + "'", rep.left_extrapolated,
                rep.right_extrapolated, rep.discrepancy / scale, c.tolerance);
    }
  }
  res.csv_files[c.name + "_abelian.csv"] = csv;
  results["abelian"] = rows;
}

// ---------------------------------------------------------------------------

void run_propagator(const ExperimentConfig& c, RunResult& res, json& results) {
  Grid grid = grid_from(c);
  std::vector<double> v = sample_potential(c.potential, grid);
  SparseOperator op = assemble_hamiltonian(grid, v);
  if (c.s_grid.empty()) throw std::invalid_argument("propagator: s_grid must not be empty");
  double s = c.s_grid.front();
  HeatPropagator prop = build_propagator(op, s, c.cheb_tol);

  std::int64_t n = grid.size();
  std::vector<double> x(n);
  for (std::int64_t i = 0; i < n; ++i) x[i] = 2.0 * uniform01_at(c.seed, i) - 1.0;
  std::vector<double> y = apply_heat(prop, x);

  EigenSystem es = dense_eigensystem(op.dense(), n, std::max(c.dense_cap, n));
  std::vector<double> yd(n, 0.0);
  for (std::int64_t j = 0; j < n; ++j) {
    const double* q = es.vectors.data() + j * n;
    double dot = 0.0;
    for (std::int64_t i = 0; i < n; ++i) dot += q[i] * x[i];
    double wj = std::exp(-s * es.values[j]) * dot;
    for (std::int64_t i = 0; i < n; ++i) yd[i] += wj * q[i];
  }
  double num = 0.0, den = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    num += (y[i] - yd[i]) * (y[i] - yd[i]);
    den += yd[i] * yd[i];
  }
  double rel = std::sqrt(num / den);

  res.csv_files[c.name + "_propagator.csv"] =
      "s,order,certified_error,rel_error\n" + fmt(s) + "," + std::to_string(prop.order()) +
      "," + fmt(prop.certified_error) + "," + fmt(rel) + "\n";
  results["propagator"] = {{"s", s},
                           {"order", prop.order()},
                           {"certified_error", prop.certified_error},
                           {"rel_error", rel}};
  if (c.tolerance > 0.0)
    add_check(res, "Chebyshev heat apply vs dense exponential", rel, 0.0, rel, c.tolerance);
}

// ---------------------------------------------------------------------------

void run_closedform(const ExperimentConfig& c, RunResult& res, json& results) {
  AngularTable table = asymptotic_limit_potential(c.potential, c.dim, 1e-8, 256);
  SphereQuadrature quad = sphere_quadrature(c.dim, c.dim == 3 ? 32 : 256);

  std::string csv = "kind,x,value\n";
  for (std::size_t j = 0; j < table.values.size(); ++j)
    csv += "angular," + std::to_string(j) + "," + fmt(table.values[j]) + "\n";
  json jint = json::array(), jlap = json::array();
  for (double t : c.lambda_grid) {
    double val = homogeneous_integrated_dos(table, quad, t);
    csv += "integrated," + fmt(t) + "," + fmt(val) + "\n";
    jint.push_back({{"lambda", t}, {"value", val}});
  }
  for (double s : c.s_grid) {
    double val = homogeneous_laplace(table, quad, s);
    csv += "laplace," + fmt(s) + "," + fmt(val) + "\n";
    jlap.push_back({{"s", s}, {"value", val}});
  }
  res.csv_files[c.name + "_closedform.csv"] = csv;
  results["integrated"] = jint;
  results["laplace"] = jlap;
  results["angular_nodes"] = table.values.size();
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  RunResult res;
  res.config = config;
  json results = json::object();

  if (config.method == "eigencount") run_eigencount(config, res, results);
  else if (config.method == "heat_bulk") run_heat_bulk(config, res, results);
  else if (config.method == "heat_ball") run_heat_ball(config, res, results);
  else if (config.method == "residue") run_residue(config, res, results);
  else if (config.method == "projection") run_projection(config, res, results);
  else if (config.method == "compare") run_compare(config, res, results);
  else if (config.method == "stability") run_stability(config, res, results);
  else if (config.method == "connes") run_connes(config, res, results);
  else if (config.method == "cwikel") run_cwikel(config, res, results);
  else if (config.method == "abelian") run_abelian(config, res, results);
  else if (config.method == "propagator") run_propagator(config, res, results);
  else if (config.method == "closedform") run_closedform(config, res, results);
  else
    throw std::invalid_argument(
        "unknown method '" + config.method +
        "' (expected one of: eigencount, heat_bulk, heat_ball, residue, projection, "
        "compare, stability, connes, cwikel, abelian, propagator, closedform)");

  json report;
  report["version"] = kVersion;
  report["config"] = json::parse(config_to_json(config));
  report["config_hash"] = config_hash(config);
  report["method"] = config.method;
  report["results"] = results;
  json jchecks = json::array();
  for (const auto& ch : res.checks)
    jchecks.push_back({{"label", ch.label},
                       {"value", ch.value},
                       {"reference", ch.reference},
                       {"deviation", ch.deviation},
                       {"tolerance", ch.tolerance},
                       {"pass", ch.pass}});
  report["checks"] = jchecks;
  report["pass"] = res.pass;
  res.report_json = report.dump(2) + "\n";
  return res;
}

std::vector<std::string> write_outputs(const RunResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::path dir(out_dir.empty() ? "." : out_dir);
  fs::create_directories(dir);
  std::vector<std::string> paths;

  auto write_file = [&paths](const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
    paths.push_back(p.string());
  };

  write_file(dir / (result.config.name + "_report.json"), result.report_json);
  for (const auto& [name, content] : result.csv_files) write_file(dir / name, content);
  return paths;
}

}  // namespace doslab
