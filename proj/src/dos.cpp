#include "doslab/dos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "doslab/closedform.hpp"

namespace doslab {

namespace {

constexpr double kTrustedWindowFactor = 0.7;  // top of window = 0.7 / h^2

// Counting backend shared by the histogram and the integrated counts. Keeps
// either a full sorted spectrum, per-axis 1D spectra (combined on the fly),
// or a handle for LDL^T inertia queries.
struct SpectrumCounter {
  std::string strategy;
  std::vector<double> eigs;                 // dense
  std::vector<std::vector<double>> axes;    // tensor, each sorted
  const SparseOperator* op = nullptr;       // inertia

  double count_lt(double t) const {
    if (strategy == "dense") {
      return static_cast<double>(
          std::lower_bound(eigs.begin(), eigs.end(), t) - eigs.begin());
    }
    if (strategy == "tensor") return tensor_count(t, false);
    return static_cast<double>(inertia_below(*op, t).below);
  }

  double count_leq(double t) const {
    if (strategy == "dense") {
      return static_cast<double>(
          std::upper_bound(eigs.begin(), eigs.end(), t) - eigs.begin());
    }
    if (strategy == "tensor") return tensor_count(t, true);
    // Inertia counts strictly below the shift; nudge the shift up so
    // eigenvalues within ~1e-9 of t are included. Exact ties are resolved
    // exactly by the other two strategies only.
    double eps = 1e-9 * std::max(1.0, std::abs(t));
    return static_cast<double>(inertia_below(*op, t + eps).below);
  }

 private:
  static double axis_count(const std::vector<double>& a, double t, bool leq) {
    auto it = leq ? std::upper_bound(a.begin(), a.end(), t)
                  : std::lower_bound(a.begin(), a.end(), t);
    return static_cast<double>(it - a.begin());
  }

  double tensor_count(double t, bool leq) const {
    int d = static_cast<int>(axes.size());
    if (d == 1) return axis_count(axes[0], t, leq);
    if (d == 2) {
      double acc = 0.0;
      for (double e0 : axes[0]) acc += axis_count(axes[1], t - e0, leq);
      return acc;
    }
    double acc = 0.0;
    for (double e0 : axes[0])
      for (double e1 : axes[1]) acc += axis_count(axes[2], t - e0 - e1, leq);
    return acc;
  }
};

void validate_axis_potentials(const SparseOperator& op,
                              const std::vector<std::vector<double>>& axes) {
  const Grid& g = op.grid;
  if (static_cast<int>(axes.size()) != g.dim)
    throw std::invalid_argument("eigencount_dos: need one axis potential per dimension");
  for (const auto& a : axes)
    if (static_cast<int>(a.size()) != g.n_per_axis)
      throw std::invalid_argument("eigencount_dos: axis potential length mismatch");
  double scale = 1.0;
  for (double v : op.vdiag) scale = std::max(scale, std::abs(v));
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto k = g.unflatten(i);
    double s = 0.0;
    for (int ax = 0; ax < g.dim; ++ax) s += axes[ax][k[ax]];
    if (std::abs(s - op.vdiag[i]) > 1e-12 * scale)
      throw std::invalid_argument(
          "eigencount_dos: axis potentials do not reproduce the sampled potential");
  }
}

SpectrumCounter make_counter(const SparseOperator& op, std::int64_t dense_cap,
                             const std::vector<std::vector<double>>* axis_potentials) {
  SpectrumCounter c;
  const Grid& g = op.grid;
  if (axis_potentials != nullptr && !axis_potentials->empty()) {
    validate_axis_potentials(op, *axis_potentials);
    c.strategy = "tensor";
    Grid g1 = build_grid(1, g.half_width, g.spacing, g.boundary);
    for (int ax = 0; ax < g.dim; ++ax) {
      SparseOperator op1 = assemble_hamiltonian(g1, (*axis_potentials)[ax]);
      auto e = operator_eigenvalues(op1, g1.size());
      std::sort(e.begin(), e.end());
      c.axes.push_back(std::move(e));
    }
    return c;
  }
  if (op.size() <= dense_cap) {
    c.strategy = "dense";
    c.eigs = operator_eigenvalues(op, dense_cap);
    std::sort(c.eigs.begin(), c.eigs.end());
    return c;
  }
  if (g.boundary == Boundary::dirichlet) {
    c.strategy = "inertia";
    c.op = &op;
    return c;
  }
  throw std::invalid_argument(
      "eigencount_dos: periodic grid exceeds the dense cap and no axis potentials "
      "were given; pass the per-axis decomposition for separable V or shrink the grid");
}

LinearFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  // Normal equations for y = intercept + slope * x.
  std::size_t n = x.size();
  double sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sxx += x[i] * x[i];
    sy += y[i];
    sxy += x[i] * y[i];
  }
  LinearFit fit;
  double det = n * sxx - sx * sx;
  if (n < 2 || std::abs(det) < 1e-300) {
    fit.intercept = n > 0 ? sy / n : 0.0;
    fit.slope = 0.0;
  } else {
    fit.intercept = (sxx * sy - sx * sxy) / det;
    fit.slope = (n * sxy - sx * sy) / det;
  }
  for (std::size_t i = 0; i < n; ++i)
    fit.max_residual =
        std::max(fit.max_residual, std::abs(fit.intercept + fit.slope * x[i] - y[i]));
  return fit;
}

}  // namespace

std::vector<double> uniform_bin_edges(double lam_max, double width) {
  if (width <= 0.0 || lam_max <= 0.0)
    throw std::invalid_argument("uniform_bin_edges: need positive width and lam_max");
  int nbins = static_cast<int>(std::ceil(lam_max / width - 1e-12));
  std::vector<double> edges(nbins + 1);
  for (int k = 0; k <= nbins; ++k) edges[k] = k * width;
  return edges;
}

double laplace_lambda_max(double s, double vmax) {
  if (s <= 0.0) throw std::invalid_argument("laplace_lambda_max: s must be positive");
  return 6.9 / s + vmax;
}

DOSHistogram eigencount_dos(const SparseOperator& op, const std::vector<double>& edges,
                            std::int64_t dense_cap,
                            const std::vector<std::vector<double>>* axis_potentials) {
  if (edges.size() < 2) throw std::invalid_argument("eigencount_dos: need at least two bin edges");
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (edges[k] <= edges[k - 1])
      throw std::invalid_argument("eigencount_dos: bin edges must increase");

  SpectrumCounter counter = make_counter(op, dense_cap, axis_potentials);
  std::size_t nbins = edges.size() - 1;

  DOSHistogram hist;
  hist.bin_edges = edges;
  hist.counts.resize(nbins);
  hist.density.resize(nbins);
  hist.outside_window.assign(nbins, 0);
  hist.volume = op.grid.volume();
  hist.strategy = counter.strategy;

  std::vector<double> below(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) below[k] = counter.count_lt(edges[k]);
  double top = counter.count_leq(edges.back());  // last bin keeps its right edge
  for (std::size_t b = 0; b < nbins; ++b) {
    double hi = (b + 1 == nbins) ? top : below[b + 1];
    hist.counts[b] = hi - below[b];
    hist.density[b] = hist.counts[b] / (hist.volume * (edges[b + 1] - edges[b]));
  }

  double vmin = 0.0, vmax = 0.0;
  if (!op.vdiag.empty()) {
    auto mm = std::minmax_element(op.vdiag.begin(), op.vdiag.end());
    vmin = *mm.first;
    vmax = *mm.second;
  }
  double h = op.grid.spacing;
  hist.window = {vmin, kTrustedWindowFactor / (h * h)};
  for (std::size_t b = 0; b < nbins; ++b)
    if (edges[b + 1] > hist.window[1] + 1e-12 || edges[b] < hist.window[0] - 1e-12)
      hist.outside_window[b] = 1;
  (void)vmax;
  return hist;
}

std::vector<double> integrated_eigencount(const SparseOperator& op,
                                          const std::vector<double>& lambdas,
                                          std::int64_t dense_cap,
                                          const std::vector<std::vector<double>>* axis_potentials) {
  SpectrumCounter counter = make_counter(op, dense_cap, axis_potentials);
  double vol = op.grid.volume();
  std::vector<double> out(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    out[i] = counter.count_leq(lambdas[i]) / vol;
  return out;
}

LaplaceCurve laplace_of_histogram(const DOSHistogram& hist,
                                  const std::vector<double>& s_grid, double vmax) {
  LaplaceCurve curve;
  curve.s_grid = s_grid;
  std::size_t nbins = hist.counts.size();
  for (double s : s_grid) {
    if (s <= 0.0) throw std::invalid_argument("laplace_of_histogram: s must be positive");
    double acc = 0.0;
    for (std::size_t b = 0; b < nbins; ++b) {
      double mid = 0.5 * (hist.bin_edges[b] + hist.bin_edges[b + 1]);
      acc += std::exp(-s * mid) * hist.counts[b];
    }
    double tail = std::exp(-s * (hist.bin_edges.back() - vmax));
    curve.values.push_back(acc / hist.volume);
    curve.tail_bounds.push_back(tail);
    curve.flagged.push_back(tail > 0.1 ? 1 : 0);
  }
  return curve;
}

ProjectionDOS projection_dos(const SparseOperator& op, double a, double b,
                             const std::vector<double>& radii, std::int64_t dense_cap) {
  if (!(b > a)) throw std::invalid_argument("projection_dos: need a < b");
  std::int64_t n = op.size();
  if (n > dense_cap)
    throw std::invalid_argument(
        "projection_dos: grid exceeds the dense cap; this route is for small boxes, "
        "use eigencount_dos or the heat routes instead");
  EigenSystem es = dense_eigensystem(op.dense(), n, dense_cap);

  const Grid& g = op.grid;
  double hd = std::pow(g.spacing, g.dim);
  std::vector<double> proj(n, 0.0);
  std::int64_t in_window = 0;
  for (std::int64_t j = 0; j < n; ++j) {
    if (es.values[j] < a || es.values[j] >= b) continue;  // half-open [a, b)
    ++in_window;
    const double* v = es.vectors.data() + j * n;
    for (std::int64_t i = 0; i < n; ++i) proj[i] += v[i] * v[i];
  }
  for (std::int64_t i = 0; i < n; ++i) proj[i] /= hd;

  DiagonalField field;
  field.values = std::move(proj);
  BallAverage avg = ball_average(g, field, radii);

  ProjectionDOS out;
  out.a = a;
  out.b = b;
  out.radii = radii;
  out.values = avg.values;
  out.count_normalized = static_cast<double>(in_window) / g.volume();
  double s_proxy = 1.0 / (b - a);
  double safe = g.half_width - 6.0 * std::sqrt(s_proxy);
  out.boundary_flag.resize(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k)
    out.boundary_flag[k] = radii[k] > safe ? 1 : 0;
  return out;
}

BallAverage ball_average(const Grid& grid, const DiagonalField& diag,
                         const std::vector<double>& radii, bool lattice_volume) {
  if (radii.empty()) throw std::invalid_argument("ball_average: no radii given");
  std::int64_t n = grid.size();
  if (static_cast<std::int64_t>(diag.values.size()) != n)
    throw std::invalid_argument("ball_average: diagonal does not match the grid");

  // Sort points by distance from the origin once; each radius then needs one
  // binary search over the prefix sums.
  std::vector<double> r2(n);
  for (std::int64_t i = 0; i < n; ++i) {
    auto x = grid.point(i);
    r2[i] = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  }
  std::vector<std::int64_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&r2](std::int64_t a, std::int64_t b) { return r2[a] < r2[b]; });

  bool have_se = !diag.stderr_values.empty();
  std::vector<double> sorted_r2(n), pref(n + 1, 0.0), pref_var(n + 1, 0.0);
  for (std::int64_t k = 0; k < n; ++k) {
    std::int64_t i = order[k];
    sorted_r2[k] = r2[i];
    pref[k + 1] = pref[k] + diag.values[i];
    if (have_se) pref_var[k + 1] = pref_var[k] + diag.stderr_values[i] * diag.stderr_values[i];
  }

  double hd = std::pow(grid.spacing, grid.dim);
  double ball_unit = unit_ball_volume(grid.dim);

  BallAverage out;
  out.radii = radii;
  out.lattice_volume = lattice_volume;
  for (double R : radii) {
    if (R <= 0.0) throw std::invalid_argument("ball_average: radii must be positive");
    // Closed ball |x|^2 <= R^2.
    auto it = std::upper_bound(sorted_r2.begin(), sorted_r2.end(), R * R);
    std::int64_t m = it - sorted_r2.begin();
    if (m == 0) throw std::invalid_argument("ball_average: radius contains no grid points");
    double vol = lattice_volume ? hd * static_cast<double>(m)
                                : ball_unit * std::pow(R, grid.dim);
    out.values.push_back(hd * pref[m] / vol);
    out.stderr_values.push_back(have_se ? hd * std::sqrt(pref_var[m]) / vol : 0.0);
  }
  out.estimate = std::accumulate(out.values.begin(), out.values.end(), 0.0) /
                 static_cast<double>(out.values.size());
  // The balls are nested, so their errors are strongly correlated; take the
  // largest single-radius error rather than pretending they average down.
  out.stderr_value = *std::max_element(out.stderr_values.begin(), out.stderr_values.end());
  return out;
}

std::vector<double> ball_policy_radii(double half_width, double s, const std::string& policy) {
  double margin, frac;
  int count;
  if (policy == "route") {
    margin = boundary_margin(s);  // 6 sqrt(s)
    frac = 0.75;
    count = 16;
  } else if (policy == "stability") {
    margin = 2.0 * std::sqrt(s);
    frac = 0.9;
    count = 8;
  } else {
    throw std::invalid_argument("ball_policy_radii: unknown policy '" + policy + "'");
  }
  double rmax = half_width - margin;
  if (rmax <= 0.0) {
    std::ostringstream msg;
    msg << "ball_policy_radii: no admissible radius, L = " << half_width
        << " leaves nothing after the boundary margin " << margin
        << " at s = " << s << "; increase L or decrease s";
    throw std::invalid_argument(msg.str());
  }
  std::vector<double> radii(count);
  double lo = frac * rmax;
  for (int i = 0; i < count; ++i)
    radii[i] = lo + (rmax - lo) * static_cast<double>(i) / (count - 1);
  return radii;
}

LinearFit residue_linear_fit(const std::vector<double>& r_grid,
                             const std::vector<double>& scaled, int dim) {
  if (r_grid.size() != scaled.size() || r_grid.empty())
    throw std::invalid_argument("residue_linear_fit: grid/data size mismatch");
  std::vector<double> u(r_grid.size());
  for (std::size_t i = 0; i < r_grid.size(); ++i) u[i] = r_grid[i] - dim;
  return least_squares_line(u, scaled);
}

void check_residue_adequacy(const std::vector<double>& r_grid, int dim, double half_width) {
  double logl = std::log(half_width);
  if (logl <= 0.0)
    throw std::invalid_argument("check_residue_adequacy: box must have L > 1");
  double umin = 1e300;
  for (double r : r_grid) {
    if (r <= dim)
      throw std::invalid_argument("check_residue_adequacy: exponents must satisfy r > d");
    umin = std::min(umin, r - dim);
  }
  if (umin * logl < 2.0) {
    std::ostringstream msg;
    msg << "residue exponents too close to the pole for this box: (r - d) * ln(L) = "
        << umin * logl << " < 2; use L >= " << std::ceil(std::exp(2.0 / umin))
        << " or larger exponents";
    throw std::invalid_argument(msg.str());
  }
}

std::vector<double> residue_r_grid(int dim, double half_width) {
  double logl = std::log(half_width);
  if (logl <= 0.0) throw std::invalid_argument("residue_r_grid: box must have L > 1");
  double u0 = 1.02 * 2.0 / logl;  // 2% above the adequacy threshold
  std::vector<double> r(4);
  for (int i = 0; i < 4; ++i) r[i] = dim + u0 + 0.1 * i;
  return r;
}

ResidueFit residue_route(const Grid& grid, const DiagonalField& diag, double s,
                         const std::vector<double>& r_grid, double ell) {
  if (ell <= 0.0) throw std::invalid_argument("residue_route: ell must be positive");
  check_residue_adequacy(r_grid, grid.dim, grid.half_width);
  std::int64_t n = grid.size();
  if (static_cast<std::int64_t>(diag.values.size()) != n)
    throw std::invalid_argument("residue_route: diagonal does not match the grid");

  std::vector<double> q2(n);  // 1 + |x/ell|^2
  for (std::int64_t i = 0; i < n; ++i) {
    auto x = grid.point(i);
    double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    q2[i] = 1.0 + r2 / (ell * ell);
  }

  double hd = std::pow(grid.spacing, grid.dim);
  double omega = sphere_area(grid.dim);

  ResidueFit fit;
  fit.s = s;
  fit.ell = ell;
  fit.r_grid = r_grid;
  for (double r : r_grid) {
    double trace = 0.0, mass = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      double w = std::pow(q2[i], -0.5 * r);
      trace += w * diag.values[i];
      mass += w;
    }
    trace *= hd;  // Tr(M_w e^{-sH}) in physical units (diag carries 1/h^d)
    mass *= hd;
    fit.scaled_raw.push_back((r - grid.dim) * trace);
    fit.scaled_norm.push_back(omega * trace / mass);
  }

  LinearFit raw = residue_linear_fit(r_grid, fit.scaled_raw, grid.dim);
  LinearFit norm = residue_linear_fit(r_grid, fit.scaled_norm, grid.dim);
  fit.intercept_raw = raw.intercept;
  fit.intercept_norm = norm.intercept;
  fit.fit_residual = norm.max_residual;
  fit.laplace_estimate = norm.intercept / omega;
  fit.dixmier_value = norm.intercept / grid.dim;
  return fit;
}

// ---------------------------------------------------------------------------
// Abelian check
// ---------------------------------------------------------------------------

namespace {

// Mean of the field over the sphere of radius rho.
double sphere_mean(const FieldFunction& field, const SphereQuadrature& quad, double rho) {
  double acc = 0.0, wsum = 0.0;
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    const auto& xi = quad.nodes[q];
    std::array<double, 3> x = {rho * xi[0], rho * xi[1], rho * xi[2]};
    acc += quad.weights[q] * field(x);
    wsum += quad.weights[q];
  }
  return acc / wsum;
}

// Integral over one panel [a, b] with a fixed Gauss-Legendre rule.
template <typename F>
double gl_panel(const F& f, double a, double b, const std::vector<double>& gx,
                const std::vector<double>& gw) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t k = 0; k < gx.size(); ++k) acc += gw[k] * f(mid + half * gx[k]);
  return acc * half;
}

// right(r) = (r-1)/|B_1| * Int_{R^d} <t>^{-dr} F(t) dt, computed exactly on
// the r -> 1 pole: with x = (1+rho^2)^{-1} and x = u^{2/(d(r-1))} the radial
// integral becomes Int_0^1 (1 - x(u))^{d/2-1} Fbar(rho(u)) du, a bounded
// integrand. rho compresses violently near u = 1, so the panels are dyadic
// toward that end.
double abelian_right(const FieldFunction& field, const SphereQuadrature& quad, int d,
                     double r, const std::vector<double>& gx, const std::vector<double>& gw) {
  if (r <= 1.0) throw std::invalid_argument("abelian_check: exponents must satisfy r > 1");
  double ex = 2.0 / (d * (r - 1.0));
  auto integrand = [&](double u) {
    double x = std::pow(u, ex);
    double rho = 1e150;  // u so small that x underflowed: effectively infinite radius
    if (x > 0.0) {
      double t = 1.0 / x - 1.0;
      rho = t > 0.0 ? std::sqrt(t) : 0.0;
    }
    if (!(rho < 1e150)) rho = 1e150;  // keep coordinates finite for the sampler
    double jac = d == 2 ? 1.0 : std::pow(std::max(0.0, 1.0 - x), 0.5 * d - 1.0);
    return jac * sphere_mean(field, quad, rho);
  };
  double acc = gl_panel(integrand, 0.0, 0.5, gx, gw);
  double lo = 0.5;
  for (int k = 1; k <= 50; ++k) {
    double hi = 1.0 - std::ldexp(1.0, -k - 1);
    acc += gl_panel(integrand, lo, hi, gx, gw);
    lo = hi;
  }
  acc += gl_panel(integrand, lo, 1.0, gx, gw);
  return acc;
}

// left(R) = (1/|B_R|) Int_{B_R} F = (d / R^d) Int_0^R rho^{d-1} Fbar(rho) drho.
double abelian_left(const FieldFunction& field, const SphereQuadrature& quad, int d,
                    double R, const std::vector<double>& gx, const std::vector<double>& gw) {
  if (R <= 0.0) throw std::invalid_argument("abelian_check: radii must be positive");
  auto integrand = [&](double rho) {
    return std::pow(rho, d - 1) * sphere_mean(field, quad, rho);
  };
  int panels = 128;
  double acc = 0.0;
  for (int k = 0; k < panels; ++k)
    acc += gl_panel(integrand, R * k / panels, R * (k + 1) / panels, gx, gw);
  return d * acc / std::pow(R, d);
}

}  // namespace

AbelianReport abelian_check(const FieldFunction& field, int dim,
                            const std::vector<double>& r_grid,
                            const std::vector<double>& R_grid) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("abelian_check: dimension must be 1..3");
  if (r_grid.empty() || R_grid.empty())
    throw std::invalid_argument("abelian_check: need at least one r and one R");
  SphereQuadrature quad = sphere_quadrature(dim, dim == 3 ? 16 : 64);
  std::vector<double> gx, gw;
  gauss_legendre(24, gx, gw);

  AbelianReport rep;
  rep.r_grid = r_grid;
  rep.R_grid = R_grid;
  for (double r : r_grid) rep.rights.push_back(abelian_right(field, quad, dim, r, gx, gw));
  for (double R : R_grid) rep.lefts.push_back(abelian_left(field, quad, dim, R, gx, gw));

  // Extrapolations: rights linearly in u = r - 1; lefts against {1, 1/R^2}.
  {
    std::vector<double> u(r_grid.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = r_grid[i] - 1.0;
    rep.right_extrapolated = least_squares_line(u, rep.rights).intercept;
  }
  {
    std::vector<double> x(R_grid.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 / (R_grid[i] * R_grid[i]);
    rep.left_extrapolated = least_squares_line(x, rep.lefts).intercept;
  }
  rep.discrepancy = std::abs(rep.left_extrapolated - rep.right_extrapolated);
  return rep;
}

}  // namespace doslab
