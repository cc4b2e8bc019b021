#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mdlab/cover.hpp"
#include "mdlab/meandim.hpp"
#include "mdlab/system.hpp"
#include "mdlab/tiling.hpp"

namespace mdlab {

struct MeasureSpec {
  // "product" (shift marginal), "random_product" (seeded marginal) or
  // "uniform" (uniform on the points).
  std::string kind = "product";
  std::vector<double> marginal;  // empty means uniform
};

struct ExperimentConfig {
  std::string system_kind = "shift";  // shift | flow
  ShiftParams shift;
  FlowParams flow;
  bool reduce = false;  // flows: restrict to the Z action
  PotentialSpec potential;

  std::vector<std::string> quantities;
  std::vector<int> L_grid;
  std::vector<double> eps_grid;
  std::vector<double> beta_grid;
  std::vector<double> s_grid;
  std::vector<MeasureSpec> measures;

  std::uint64_t seed = 0;
  std::string out_dir;
  SolveMode mode = SolveMode::exact;
  std::size_t threads = 1;

  double delta = 0.4;           // fiber radius for local
  double frostman_delta = 1.0;  // Frostman scale
  double frostman_t = 0.5;      // Frostman exponent
  int metric_L = 0;             // window for hausdorff / frostman / radist (0: max of L grid)

  std::size_t max_points = kDefaultPointCap;
  double time_limit = 60.0;

  std::string canonical;  // normalized JSON text of the system block
};

// Throws ConfigInvalid with a description of the first problem found.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

SolverOptions solver_options(const ExperimentConfig& cfg);
std::vector<Quantity> parse_quantities(const std::vector<std::string>& names);

// Throws BudgetExceeded when the model needs more than cfg.max_points points.
SystemModel build_system(const ExperimentConfig& cfg);
std::vector<MeasureOnPoints> build_measures(const ExperimentConfig& cfg, const SystemModel& sys);

// Quasi-tiling instance {d, A: {lo, hi}, families: [[{corner, side}]], eta, k0}.
// k0 (default: all) is the number of leading families used.
struct TileInstance {
  int d = 1;
  Box A;
  std::vector<std::vector<Cube>> families;
  double eta = 0.5;
  std::size_t k0 = 0;
  TileOptions options;
};

TileInstance parse_tile_instance(const std::string& json_text);
TileInstance load_tile_instance(const std::string& path);

}  // namespace mdlab
