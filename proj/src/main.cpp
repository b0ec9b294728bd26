// Command line front end. Subcommands:
//   dos run <config.json>   run an experiment described by a JSON config
//   dos preset <name>       print (or write) a ready-made config
//   dos compare <...>       shorthand for running a method=compare config
// Exit code 0: all checks passed. 1: a tolerance check failed. 2: usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "doslab/config.hpp"
#include "doslab/report.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Accepts either a preset name or a path to a JSON config file.
doslab::ExperimentConfig load_config_arg(const std::string& arg) {
  if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json")
    return doslab::config_from_json(slurp(arg));
  return doslab::preset(arg);
}

int run_and_report(const doslab::ExperimentConfig& config, const std::string& out_dir) {
  doslab::RunResult result = doslab::run_experiment(config);
  std::vector<std::string> paths = doslab::write_outputs(result, out_dir);
  for (const auto& p : paths) std::cout << "wrote " << p << "\n";
  for (const auto& ch : result.checks) {
    std::printf("[%s] %s: value=%.6g reference=%.6g deviation=%.3g tolerance=%.3g\n",
                ch.pass ? "PASS" : "FAIL", ch.label.c_str(), ch.value, ch.reference,
                ch.deviation, ch.tolerance);
  }
  if (result.checks.empty()) std::cout << "no tolerance checks configured\n";
  std::cout << (result.pass ? "PASS" : "FAIL") << " " << config.name << "\n";
  return result.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density-of-states laboratory for lattice Schrodinger operators.\n"
               "Heavy linear algebra is threaded when OpenMP is available; set\n"
               "OMP_NUM_THREADS to control it."};
  app.require_subcommand(1);

  std::string run_config, run_outdir = "out";
  long long run_seed = -1;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  run->add_option("config", run_config, "Path to config JSON (or preset name)")->required();
  run->add_option("--output-dir", run_outdir, "Directory for report and CSV outputs");
  run->add_option("--seed", run_seed, "Override the RNG seed from the config");

  std::string preset_name, preset_emit;
  auto* pre = app.add_subcommand("preset", "Show a ready-made experiment config");
  pre->add_option("name", preset_name, "Preset name (omit to list all)");
  pre->add_option("--emit-config", preset_emit, "Write the config JSON to this path");
  pre->add_flag("--run", "Run the preset instead of printing it");

  std::string cmp_arg, cmp_outdir = "out";
  auto* cmp = app.add_subcommand(
      "compare", "Run a three-route comparison (config must have method=compare)");
  cmp->add_option("config", cmp_arg, "Preset name or config JSON path")->required();
  cmp->add_option("--output-dir", cmp_outdir, "Directory for report and CSV outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      doslab::ExperimentConfig config = load_config_arg(run_config);
      if (run_seed >= 0) config.seed = static_cast<std::uint64_t>(run_seed);
      return run_and_report(config, run_outdir);
    }
    if (pre->parsed()) {
      if (preset_name.empty()) {
        for (const std::string& n : doslab::preset_names()) std::cout << n << "\n";
        return 0;
      }
      doslab::ExperimentConfig config = doslab::preset(preset_name);
      std::string text = doslab::config_to_json(config) + "\n";
      if (pre->count("--run") > 0) return run_and_report(config, "out");
      if (!preset_emit.empty()) {
        std::ofstream out(preset_emit, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + preset_emit);
        out << text;
        std::cout << "wrote " << preset_emit << "\n";
      } else {
        std::cout << text;
      }
      return 0;
    }
    if (cmp->parsed()) {
      doslab::ExperimentConfig config = load_config_arg(cmp_arg);
      if (config.method != "compare") {
        std::cerr << "error: 'dos compare' needs a config with method=compare, got method="
                  << config.method << "\n";
        return 2;
      }
      return run_and_report(config, cmp_outdir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
