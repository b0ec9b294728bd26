// Acceptance gate. Each criterion number runs one fixed experiment (or a
// small family) and prints a single PASS/FAIL line; the exit code follows.
//
//   acceptance <n>   with n in 1..10

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doslab/config.hpp"
#include "doslab/report.hpp"

namespace {

void print_checks(const doslab::RunResult& r) {
  for (const auto& ch : r.checks)
    std::printf("  [%s] %s: value=%.6g reference=%.6g deviation=%.3g tolerance=%.3g\n",
                ch.pass ? "ok" : "FAIL", ch.label.c_str(), ch.value, ch.reference,
                ch.deviation, ch.tolerance);
}

bool preset_passes(const std::string& name) {
  doslab::RunResult r = doslab::run_experiment(doslab::preset(name));
  std::printf(" %s:\n", name.c_str());
  print_checks(r);
  return r.pass;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Two full runs of the same config must agree byte for byte, both in memory
// and after a round trip through the filesystem.
bool deterministic(const std::string& name) {
  namespace fs = std::filesystem;
  doslab::ExperimentConfig config = doslab::preset(name);
  doslab::RunResult a = doslab::run_experiment(config);
  doslab::RunResult b = doslab::run_experiment(config);
  bool ok = a.report_json == b.report_json && a.csv_files.size() == b.csv_files.size();
  for (const auto& [fname, content] : a.csv_files) {
    auto it = b.csv_files.find(fname);
    ok = ok && it != b.csv_files.end() && it->second == content;
  }

  fs::path base = fs::temp_directory_path() / ("doslab-determinism-" + name);
  fs::path d1 = base / "first", d2 = base / "second";
  std::vector<std::string> p1 = doslab::write_outputs(a, d1.string());
  std::vector<std::string> p2 = doslab::write_outputs(b, d2.string());
  ok = ok && p1.size() == p2.size();
  for (std::size_t i = 0; ok && i < p1.size(); ++i)
    ok = slurp(p1[i]) == slurp(p2[i]);
  fs::remove_all(base);

  std::printf("  [%s] %s: reruns byte-identical (%zu files)\n", ok ? "ok" : "FAIL",
              name.c_str(), a.csv_files.size() + 1);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
    return 2;
  }
  int crit = std::atoi(argv[1]);
  bool pass = false;
  const char* label = "";

  switch (crit) {
    case 1:
      label = "free bulk heat diagonal matches 1/(4 pi s) within 1 percent";
      pass = preset_passes("example1-free");
      break;
    case 2:
      label = "free integrated DOS by eigenvalue counting within 3 percent";
      pass = preset_passes("free-eigencount");
      break;
    case 3:
      label = "eigencount, ball and residue routes agree pairwise within 5 percent";
      pass = preset_passes("route-compare-free");
      pass = preset_passes("route-compare-const1") && pass;
      pass = preset_passes("route-compare-halfspace") && pass;
      break;
    case 4:
      label = "half-space integrated DOS matches the two-sided average within 5 percent";
      pass = preset_passes("thm-homogeneous");
      break;
    case 5:
      label = "compact perturbation fades below 1 percent at L=40 and decreases in L";
      pass = preset_passes("thm-stability");
      break;
    case 6:
      label = "abelian ball-average / residue identity agrees within 0.02";
      pass = preset_passes("abelian-check");
      break;
    case 7:
      label = "Dixmier sums land within 10 percent of the integral of f over 4 pi";
      pass = preset_passes("connes-check");
      break;
    case 8:
      label = "weak singular-value quasinorm grows at most 15 percent per box doubling";
      pass = preset_passes("cwikel-check");
      break;
    case 9:
      label = "Chebyshev heat apply matches the dense exponential to 1e-8";
      pass = preset_passes("propagator-oracle");
      break;
    case 10:
      label = "identical configs rerun to byte-identical reports and CSVs";
      pass = deterministic("free-eigencount");
      pass = deterministic("abelian-check") && pass;
      pass = deterministic("example1-free") && pass;
      break;
    default:
      std::fprintf(stderr, "unknown criterion %d (expected 1..10)\n", crit);
      return 2;
  }

  std::printf("criterion %02d (%s): %s\n", crit, label, pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}
