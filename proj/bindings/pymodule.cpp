// Python bindings. Configs and reports cross the boundary as JSON strings;
// numeric helpers cross as plain scalars and vectors.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "doslab/chebyshev.hpp"
#include "doslab/closedform.hpp"
#include "doslab/config.hpp"
#include "doslab/dos.hpp"
#include "doslab/grid.hpp"
#include "doslab/heat.hpp"
#include "doslab/operator.hpp"
#include "doslab/potential.hpp"
#include "doslab/report.hpp"

namespace py = pybind11;
using namespace doslab;

namespace {

std::string run_json(const std::string& config_json, const std::string& output_dir) {
  ExperimentConfig config = config_from_json(config_json);
  RunResult result = run_experiment(config);
  if (!output_dir.empty()) write_outputs(result, output_dir);
  return result.report_json;
}

// One-call heat diagonal on a fresh grid, for exploratory work from python.
std::vector<double> heat_diagonal_values(int dim, double half_width, double spacing,
                                         const std::string& boundary,
                                         const std::string& potential_json, double s) {
  Grid grid = build_grid(dim, half_width, spacing, boundary_from_string(boundary));
  PotentialSpec spec = PotentialSpec::from_json(potential_json);
  SparseOperator op = assemble_hamiltonian(grid, sample_potential(spec, grid));
  HeatPropagator prop = build_propagator(op, s);
  DiagonalOptions opt;
  if (auto axes = separable_potential(spec, grid)) opt.axis_potentials = *axes;
  return heat_diagonal(prop, opt).values;
}

std::vector<double> integrated_dos_values(int dim, double half_width, double spacing,
                                          const std::string& boundary,
                                          const std::string& potential_json,
                                          const std::vector<double>& lambdas) {
  Grid grid = build_grid(dim, half_width, spacing, boundary_from_string(boundary));
  PotentialSpec spec = PotentialSpec::from_json(potential_json);
  SparseOperator op = assemble_hamiltonian(grid, sample_potential(spec, grid));
  auto axes = separable_potential(spec, grid);
  return integrated_eigencount(op, lambdas, kDenseCapDefault, axes ? &*axes : nullptr);
}

}  // namespace

PYBIND11_MODULE(_doslab, m) {
  m.doc() = "Density of states of lattice Schrodinger operators";
  m.attr("__version__") = kVersion;

  m.def("preset_names", &preset_names, "Names of the ready-made experiment configs");
  m.def("preset_config",
        [](const std::string& name) { return config_to_json(preset(name)); },
        py::arg("name"), "Canonical JSON for a named preset");
  m.def("config_hash",
        [](const std::string& config_json) {
          return config_hash(config_from_json(config_json));
        },
        py::arg("config_json"), "Stable hash of a config's canonical form");
  m.def("run", &run_json, py::arg("config_json"), py::arg("output_dir") = "",
        py::call_guard<py::gil_scoped_release>(),
        "Run an experiment; returns the report JSON and optionally writes files");

  m.def("free_integrated_dos", &free_integrated_dos, py::arg("dim"), py::arg("t"),
        py::arg("c") = 0.0, "Integrated DOS of -Delta + c");
  m.def("free_laplace", &free_laplace, py::arg("dim"), py::arg("s"), py::arg("c") = 0.0,
        "Laplace transform of the free DOS: (4 pi s)^(-d/2) exp(-s c)");
  m.def("halfspace_integrated_dos", &halfspace_integrated_dos, py::arg("dim"),
        py::arg("t"), py::arg("a"), "Integrated DOS of the half-space step potential");
  m.def("halfspace_laplace", &halfspace_laplace, py::arg("dim"), py::arg("s"),
        py::arg("a"), "Laplace-domain DOS of the half-space step potential");

  m.def("heat_s_min", &heat_s_min, py::arg("spacing"),
        "Smallest heat time the lattice resolves, 10 h^2");
  m.def("boundary_margin", &boundary_margin, py::arg("s"),
        "Distance the boundary contaminates at heat time s, 6 sqrt(s)");

  m.def("heat_diagonal", &heat_diagonal_values, py::arg("dim"), py::arg("half_width"),
        py::arg("spacing"), py::arg("boundary"), py::arg("potential_json"), py::arg("s"),
        py::call_guard<py::gil_scoped_release>(),
        "Diagonal of exp(-s H) on a fresh grid, flattened row-major");
  m.def("integrated_dos", &integrated_dos_values, py::arg("dim"), py::arg("half_width"),
        py::arg("spacing"), py::arg("boundary"), py::arg("potential_json"),
        py::arg("lambdas"), py::call_guard<py::gil_scoped_release>(),
        "Eigenvalue counting per unit volume at each threshold");
}
