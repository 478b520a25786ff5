#pragma once
#include <string>
#include <vector>

#include "kxxz/model.hpp"

namespace kxxz {

/// Fully resolved settings of one analysis run. Defaults here are the
/// documented defaults of every scenario; a config file overrides them and
/// command-line flags override the file.
struct RunConfig {
  std::string scenario;
  ModelParams params;  // L = 0 until set, J = V = T = 1, epsilon = 0
  std::string initial = "neel";
  long steps = 500;
  std::string out_dir = ".";
  int workers = 1;
  std::string mode = "auto";  // evolution engine: auto|dense|sector|krylov
  int krylov_m = 30;
  double krylov_tol = 1e-10;
  double weight_cut = 0.1;    // pi-pair candidate cut, fraction of max overlap
  double pair_tol = 0.05;     // |gap*T - pi| acceptance window
  double touch_tol = 0.05;    // lifetime envelope-touch tolerance
  long max_steps = 100000;    // lifetime step cap
  std::string threshold = "auto";  // fragment amplitude cut, auto or a number
  double sample_frac = 1.0;   // initial-state subsample fraction for h_bar
  std::vector<int> L_list;
  std::vector<double> V_list;
  std::vector<double> omega_list;
  std::vector<double> epsilon_list;
};

/// Applies one key = value setting. Unknown keys and unparsable or
/// out-of-range values throw ConfigError.
void apply_key(RunConfig& cfg, const std::string& key,
               const std::string& value);

/// Reads a flat key = value file ('#' lines and blank lines skipped) on top
/// of base. Throws ConfigError on IO failure or any bad line.
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Canonical '# key = value' block embedded in every output file. Feeding
/// each line back through apply_key reproduces the config.
std::string echo_config(const RunConfig& cfg);

}  // namespace kxxz
