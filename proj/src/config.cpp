#include "doslab/config.hpp"

#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace doslab {

using json = nlohmann::json;

namespace {

json potential_json(const PotentialSpec& spec) { return json::parse(spec.to_json()); }

PotentialSpec potential_from(const json& j) { return PotentialSpec::from_json(j.dump()); }

}  // namespace

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["method"] = c.method;
  j["dim"] = c.dim;
  j["half_width"] = c.half_width;
  j["spacing"] = c.spacing;
  j["boundary"] = c.boundary;
  j["potential"] = potential_json(c.potential);
  j["perturbation"] = potential_json(c.perturbation);
  j["s_grid"] = c.s_grid;
  j["lambda_grid"] = c.lambda_grid;
  j["bin_width"] = c.bin_width;
  j["ball_policy"] = c.ball_policy;
  j["lattice_volume"] = c.lattice_volume;
  j["ell"] = c.ell;
  j["r_grid"] = c.r_grid;
  j["abelian_r_grid"] = c.abelian_r_grid;
  j["abelian_big_r_grid"] = c.abelian_big_r_grid;
  j["fields"] = c.fields;
  j["l_grid"] = c.l_grid;
  j["n_grid"] = c.n_grid;
  j["sigma_frac"] = c.sigma_frac;
  j["cwikel_p"] = c.cwikel_p;
  j["z_re"] = c.z_re;
  j["z_im"] = c.z_im;
  j["window_a"] = c.window_a;
  j["window_b"] = c.window_b;
  j["diag_mode"] = c.diag_mode;
  j["probes"] = c.probes;
  j["seed"] = c.seed;
  j["dense_cap"] = c.dense_cap;
  j["column_budget"] = c.column_budget;
  j["cheb_tol"] = c.cheb_tol;
  j["tolerance"] = c.tolerance;
  j["check_s"] = c.check_s;
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") c.name = value.get<std::string>();
    else if (key == "method") c.method = value.get<std::string>();
    else if (key == "dim") c.dim = value.get<int>();
    else if (key == "half_width") c.half_width = value.get<double>();
    else if (key == "spacing") c.spacing = value.get<double>();
    else if (key == "boundary") c.boundary = value.get<std::string>();
    else if (key == "potential") c.potential = potential_from(value);
    else if (key == "perturbation") c.perturbation = potential_from(value);
    else if (key == "s_grid") c.s_grid = value.get<std::vector<double>>();
    else if (key == "lambda_grid") c.lambda_grid = value.get<std::vector<double>>();
    else if (key == "bin_width") c.bin_width = value.get<double>();
    else if (key == "ball_policy") c.ball_policy = value.get<std::string>();
    else if (key == "lattice_volume") c.lattice_volume = value.get<bool>();
    else if (key == "ell") c.ell = value.get<double>();
    else if (key == "r_grid") c.r_grid = value.get<std::vector<double>>();
    else if (key == "abelian_r_grid") c.abelian_r_grid = value.get<std::vector<double>>();
    else if (key == "abelian_big_r_grid") c.abelian_big_r_grid = value.get<std::vector<double>>();
    else if (key == "fields") c.fields = value.get<std::vector<std::string>>();
    else if (key == "l_grid") c.l_grid = value.get<std::vector<double>>();
    else if (key == "n_grid") c.n_grid = value.get<std::vector<std::int64_t>>();
    else if (key == "sigma_frac") c.sigma_frac = value.get<double>();
    else if (key == "cwikel_p") c.cwikel_p = value.get<int>();
    else if (key == "z_re") c.z_re = value.get<double>();
    else if (key == "z_im") c.z_im = value.get<double>();
    else if (key == "window_a") c.window_a = value.get<double>();
    else if (key == "window_b") c.window_b = value.get<double>();
    else if (key == "diag_mode") c.diag_mode = value.get<std::string>();
    else if (key == "probes") c.probes = value.get<int>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else if (key == "dense_cap") c.dense_cap = value.get<std::int64_t>();
    else if (key == "column_budget") c.column_budget = value.get<std::int64_t>();
    else if (key == "cheb_tol") c.cheb_tol = value.get<double>();
    else if (key == "tolerance") c.tolerance = value.get<double>();
    else if (key == "check_s") c.check_s = value.get<std::vector<double>>();
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
  if (c.method.empty()) throw std::invalid_argument("config is missing required key 'method'");
  return c;
}

std::string config_hash(const ExperimentConfig& config) {
  std::string text = config_to_json(config);
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64-bit
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace doslab
