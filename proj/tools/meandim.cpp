#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdlab/cache.hpp"
#include "mdlab/config.hpp"
#include "mdlab/cover.hpp"
#include "mdlab/csv.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/harness.hpp"
#include "mdlab/hausdorff.hpp"
#include "mdlab/meandim.hpp"
#include "mdlab/orbit.hpp"
#include "mdlab/parallel.hpp"
#include "mdlab/ratedist.hpp"
#include "mdlab/tiling.hpp"

namespace {

using nlohmann::json;
using namespace mdlab;

constexpr int kExitOk = 0;
constexpr int kExitGating = 2;
constexpr int kExitConfig = 3;
constexpr int kExitBudget = 4;
constexpr int kExitOther = 1;

struct Globals {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::size_t threads = 0;
};

// A gating invariant failed after the artifacts were written.
struct GatingFailure {
  std::string what;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::config_invalid:
    case ErrorCode::invalid_argument:
    case ErrorCode::window_exceeded:
    case ErrorCode::incompatible_grid:
      return kExitConfig;
    case ErrorCode::budget_exceeded:
    case ErrorCode::cap_exceeded:
      return kExitBudget;
    case ErrorCode::hypothesis_violated:
    case ErrorCode::selection_failed:
    case ErrorCode::feasibility_violated:
    case ErrorCode::not_a_cover:
    case ErrorCode::non_invariant_measure:
      return kExitGating;
    default:
      return kExitOther;
  }
}

void diagnose(const std::string& kind, const std::string& message, int code) {
  json d;
  d["error"] = kind;
  d["message"] = message;
  d["exit_code"] = code;
  std::cerr << d.dump() << "\n";
}

class Output {
 public:
  explicit Output(std::string dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) const {
    if (dir_.empty()) {
      std::cout << content;
      if (!content.empty() && content.back() != '\n') std::cout << "\n";
      return;
    }
    std::filesystem::create_directories(dir_);
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::config_invalid, "cannot write '" + path.string() + "'");
    out << content;
    std::cerr << "wrote " << path.string() << "\n";
  }

  void write_json(const std::string& name, const json& j) const { write(name, j.dump(2) + "\n"); }

 private:
  std::string dir_;
};

std::string cell(int L, double eps) { return "L=" + std::to_string(L) + ";eps=" + format_number(eps); }

std::string yes_no(bool b) { return b ? "true" : "false"; }

// Shared state of one run: config, system and solver settings.
struct Run {
  ExperimentConfig cfg;
  SolverOptions opt;
  Output out{""};
  MetricCache cache;

  SystemModel system() const { return build_system(cfg); }

  int metric_L() const {
    return cfg.metric_L > 0 ? cfg.metric_L : *std::max_element(cfg.L_grid.begin(), cfg.L_grid.end());
  }

  FiniteMetricSpace sup_metric(const SystemModel& sys, int L) {
    return cache.get(cfg.canonical + "|sup|L=" + std::to_string(L), [&] { return orbit_metric_sup(sys, L); });
  }
};

Run make_run(const Globals& g) {
  require(!g.config.empty(), ErrorCode::config_invalid, "this subcommand needs --config");
  Run run;
  run.cfg = load_config(g.config);
  if (g.seed) run.cfg.seed = *g.seed;
  if (!g.mode.empty()) {
    require(g.mode == "exact" || g.mode == "greedy", ErrorCode::config_invalid, "--mode must be exact or greedy");
    run.cfg.mode = parse_mode(g.mode);
  }
  if (g.threads > 0) run.cfg.threads = g.threads;
  if (!g.out.empty()) run.cfg.out_dir = g.out;
  set_thread_count(run.cfg.threads);
  run.opt = solver_options(run.cfg);
  run.out = Output(run.cfg.out_dir);
  return run;
}

void cmd_system(const Globals& g) {
  Run run = make_run(g);
  const SystemModel sys = run.system();
  const auto violations = validate_metric(sys.base_metric());
  json j;
  j["kind"] = run.cfg.system_kind;
  j["rank"] = sys.rank();
  j["points"] = sys.size();
  j["rho0"] = sys.rho0();
  j["budget"] = sys.budget();
  j["potential"] = {{"name", sys.potential_spec().name()}, {"c", sys.potential_spec().c},
                    {"min", sys.potential().min()}, {"max", sys.potential().max()}};
  j["spatial_diameter"] = sys.base_metric().spatial_diameter();
  j["min_positive_distance"] = sys.base_metric().min_positive_distance();
  j["metric_violations"] = violations.size();
  if (!violations.empty()) j["first_violation"] = violations.front().describe();
  j["provenance"] = "systems.build[" + run.cfg.canonical + "]";
  run.out.write_json("system.json", j);
  if (!violations.empty()) throw GatingFailure{"base metric fails the metric axioms"};
}

void cmd_cover(const Globals& g) {
  Run run = make_run(g);
  const SystemModel sys = run.system();
  CsvTable t({"L", "eps", "metric", "value", "log_value", "normalized", "optimal", "provenance"});
  for (OrbitMetricKind kind : {OrbitMetricKind::sup, OrbitMetricKind::avg}) {
    const std::string name = kind == OrbitMetricKind::sup ? "sup" : "avg";
    for (const CoverRow& r : covering_table(sys, run.cfg.L_grid, run.cfg.eps_grid, kind, run.opt)) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      t.add({std::to_string(r.L), format_number(r.eps), name, format_number(r.resolved ? r.value : nan),
             format_number(r.resolved ? r.log_value : nan), format_number(r.resolved ? r.normalized : nan),
             yes_no(r.optimal),
             "cover.covering_number_potential[" + cell(r.L, r.eps) + ";metric=" + name + "]"});
    }
  }
  run.out.write("cover.csv", t.str());
}

void cmd_hausdorff(const Globals& g) {
  Run run = make_run(g);
  const SystemModel sys = run.system();
  const int L = run.metric_L();
  const FiniteMetricSpace dl = run.sup_metric(sys, L);
  const PotentialField phi = potential_integral(sys, L);
  CsvTable t({"eps", "s_or_dim", "value", "optimal", "provenance"});
  for (double eps : run.cfg.eps_grid) {
    if (eps <= dl.rho0()) {
      t.add({format_number(eps), "dimh", "nan", "false", "hausdorff.dimh_at_scale[" + cell(L, eps) + ";unresolved]"});
      continue;
    }
    for (double s : run.cfg.s_grid) {
      const double v = hausdorff_value(dl, phi, eps, s, run.opt);
      t.add({format_number(eps), format_number(s), format_number(v), yes_no(run.opt.mode == SolveMode::exact),
             "hausdorff.hausdorff_value[" + cell(L, eps) + ";s=" + format_number(s) + "]"});
    }
    const DimhResult r = dimh_at_scale(dl, phi, eps, run.opt);
    t.add({format_number(eps), "dimh", format_number(r.value), yes_no(r.optimal),
           "hausdorff.dimh_at_scale[" + cell(L, eps) + "]"});
  }
  run.out.write("hausdorff.csv", t.str());
}

void cmd_frostman(const Globals& g) {
  Run run = make_run(g);
  const SystemModel sys = run.system();
  const int L = run.metric_L();
  const FiniteMetricSpace dl = run.sup_metric(sys, L);
  json j;
  j["t"] = run.cfg.frostman_t;
  j["delta"] = run.cfg.frostman_delta;
  j["provenance"] = "hausdorff.frostman_measure[L=" + std::to_string(L) + "]";
  double violation = 0.0;
  try {
    const FrostmanResult r = frostman_measure(dl, run.cfg.frostman_delta, run.cfg.frostman_t);
    json measure = json::object();
    for (std::size_t i = 0; i < r.nu.size(); ++i)
      if (r.nu[i] > 0.0) measure[std::to_string(i)] = r.nu[i];
    j["feasible"] = true;
    j["measure"] = measure;
    j["binding"] = r.binding;
    j["lp_optimum"] = r.lp_optimum;
    j["constraints_checked"] = r.constraints_checked;
    j["exhaustive"] = r.exhaustive;
    violation = frostman_violation(dl, r.nu, run.cfg.frostman_delta, run.cfg.frostman_t);
    j["max_violation"] = violation;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::infeasible) throw;
    j["feasible"] = false;
    j["reason"] = e.what();
  }
  run.out.write_json("frostman.json", j);
  if (violation > 1e-9) throw GatingFailure{"Frostman measure violates a constraint"};
}

const MeasureOnPoints& first_measure(const std::vector<MeasureOnPoints>& ms) {
  require(!ms.empty(), ErrorCode::config_invalid, "this subcommand needs a nonempty 'measures' list");
  return ms.front();
}

void cmd_radist(const Globals& g) {
  Run run = make_run(g);
  const SystemModel sys = run.system();
  const auto measures = build_measures(run.cfg, sys);
  const MeasureOnPoints& mu = first_measure(measures);
  const int L = run.metric_L();
  const std::vector<double> betas = run.cfg.beta_grid.empty() ? default_betas() : run.cfg.beta_grid;
  std::vector<double> sorted = betas;
  std::sort(sorted.begin(), sorted.end());
  CsvTable t({"beta", "D", "R", "converged", "provenance"});
  for (const RDPoint& p : ba_sweep(mu.as_pmf(), orbit_codebook(sys, L), sorted))
    t.add({format_number(p.beta), format_number(p.D), format_number(p.R), yes_no(p.converged),
           "ratedist.ba_sweep[L=" + std::to_string(L) + ";beta=" + format_number(p.beta) + "]"});
  run.out.write("radist.csv", t.str());
}

void cmd_rdim(const Globals& g) {
  Run run = make_run(g);
  const SystemModel sys = run.system();
  const auto measures = build_measures(run.cfg, sys);
  first_measure(measures);
  CsvTable t({"measure", "eps", "L", "R", "normalized", "provenance"});
  json summary = json::object();
  for (std::size_t m = 0; m < measures.size(); ++m) {
    std::vector<double> values;
    for (double eps : run.cfg.eps_grid) {
      const RdistReport rep = rdist_function(sys, measures[m], eps, run.cfg.L_grid);
      for (std::size_t i = 0; i < rep.L_list.size(); ++i)
        t.add({std::to_string(m), format_number(eps), std::to_string(rep.L_list[i]), format_number(rep.per_L_raw[i]),
               format_number(rep.per_L[i]),
               "ratedist.rate_at_distortion[measure=" + std::to_string(m) + ";" + cell(rep.L_list[i], eps) + "]"});
      values.push_back(rep.value);
    }
    const RdimEstimate est = rdim_from_values(run.cfg.eps_grid, values);
    summary[std::to_string(m)] = {{"lsq_slope", est.lsq_slope},
                                  {"upper_slope", est.upper_slope},
                                  {"lower_slope", est.lower_slope},
                                  {"provenance", "ratedist.rdim_from_values[measure=" + std::to_string(m) + "]"}};
  }
  run.out.write("rdim.csv", t.str());
  run.out.write_json("rdim_summary.json", summary);
}

SweepTable sweep(Run& run, const SystemModel& sys, CsvTable& t, json& summary) {
  const std::vector<Quantity> wanted = parse_quantities(run.cfg.quantities);
  SweepTable table = mdim_sweep(sys, run.cfg.eps_grid, run.cfg.L_grid, run.opt);
  for (const SweepRow& r : table.rows) {
    if (std::find(wanted.begin(), wanted.end(), r.quantity) == wanted.end()) continue;
    t.add({std::to_string(r.L), format_number(r.eps), to_string(r.quantity), format_number(r.value),
           format_number(r.normalized), yes_no(r.optimal), yes_no(r.resolved), r.note,
           "meandim.mdim_sweep[" + cell(r.L, r.eps) + ";quantity=" + to_string(r.quantity) + "]"});
  }
  summary = json::object();
  for (Quantity q : wanted) {
    const std::string name = to_string(q);
    json entry;
    std::vector<bool> flags;
    for (const SweepRow& r : table.rows)
      if (r.quantity == q && r.resolved) flags.push_back(r.optimal);
    entry["optimal_flags"] = flags;
    const auto it = table.summary.find(name);
    if (it != table.summary.end()) {
      entry["estimate"] = it->second.estimate;
      entry["extrapolated"] = it->second.extrapolated;
      entry["cell"] = {{"L", it->second.L}, {"eps", it->second.eps}};
    } else {
      entry["estimate"] = nullptr;
      entry["cell"] = nullptr;
    }
    summary[name] = entry;
  }
  return table;
}

CsvTable sweep_csv() {
  return CsvTable({"L", "eps", "quantity", "value", "normalized", "optimal", "resolved", "note", "provenance"});
}

void cmd_meandim_sweep(const Globals& g) {
  Run run = make_run(g);
  const SystemModel sys = run.system();
  CsvTable t = sweep_csv();
  json summary;
  const SweepTable table = sweep(run, sys, t, summary);
  run.out.write("meandim.csv", t.str());
  run.out.write_json("meandim_summary.json", summary);
  if (!table.chain_ok || !table.nerve_ok)
    throw GatingFailure{table.violations.empty() ? "chain check failed" : table.violations.front()};
}

void cmd_meandim_verify(const Globals& g) {
  Run run = make_run(g);
  const SystemModel sys = run.system();
  CsvTable rows = sweep_csv();
  json summary;
  const SweepTable table = sweep(run, sys, rows, summary);
  std::vector<MeasureOnPoints> measures = build_measures(run.cfg, sys);
  if (measures.empty()) measures.push_back(product_measure(sys, Pmf::uniform(sys.shift_params().q)));
  const VariationalReport var = variational_report(sys, measures, run.cfg.eps_grid, run.cfg.L_grid, run.opt);

  CsvTable t({"check", "passed", "value", "detail", "provenance"});
  t.add({"chain", yes_no(table.chain_ok), std::to_string(table.violations.size()),
         table.violations.empty() ? "" : table.violations.front(), "meandim.mdim_sweep[chain]"});
  t.add({"nerve", yes_no(table.nerve_ok), "", "", "meandim.widim_upper[nerve]"});
  bool ok = table.chain_ok && table.nerve_ok;
  for (const VariationalRow& r : var.rows) {
    if (!r.resolved) continue;
    t.add({"variational", yes_no(r.gating_ok), format_number(r.dimh_L1_est - r.mdim_est),
           "mdim=" + format_number(r.mdim_est) + ";dimh_L1=" + format_number(r.dimh_L1_est),
           "meandim.variational_report[eps=" + format_number(r.eps) + "]"});
    ok = ok && r.gating_ok;
  }
  for (std::size_t m = 0; m < var.rdim_plus_integral.size(); ++m)
    t.add({"rate_side", "true", format_number(var.rdim_plus_integral[m]),
           "integral=" + format_number(var.integrals[m]),
           "meandim.variational_report[measure=" + std::to_string(m) + "]"});
  run.out.write("meandim_verify.csv", t.str());
  run.out.write_json("meandim_summary.json", summary);
  if (!ok || !var.ok) throw GatingFailure{"meandim verification failed"};
}

void cmd_local(const Globals& g) {
  Run run = make_run(g);
  const SystemModel sys = run.system();
  const LocalFormulaReport rep = local_formula_report(sys, run.cfg.delta, run.cfg.eps_grid, run.cfg.L_grid, run.opt);
  CsvTable t({"eps", "local", "global", "ratio", "argmax", "fibers", "resolved", "ok", "provenance"});
  for (const LocalFormulaRow& r : rep.rows)
    t.add({format_number(r.eps), format_number(r.local), format_number(r.global), format_number(r.ratio),
           std::to_string(r.argmax), std::to_string(r.fibers), yes_no(r.resolved), yes_no(r.ok),
           "meandim.local_formula_report[eps=" + format_number(r.eps) + ";delta=" + format_number(run.cfg.delta) +
               "]"});
  run.out.write("local.csv", t.str());
  if (!rep.ok) throw GatingFailure{"local sup exceeds the global value"};
}

void cmd_tile(const Globals& g, const std::string& instance) {
  const std::string path = instance.empty() ? g.config : instance;
  require(!path.empty(), ErrorCode::config_invalid, "tile needs an instance file (--config or --instance)");
  const TileInstance inst = load_tile_instance(path);
  const Output out(g.out);
  TileDiagnostics diag;
  const std::vector<Cube> picked = quasi_tile(inst.d, inst.A, inst.families, inst.eta, inst.options, &diag);
  json cubes = json::array();
  for (const Cube& c : picked) {
    std::vector<double> corner(c.corner.begin(), c.corner.begin() + inst.d);
    cubes.push_back({{"corner", corner}, {"side", c.side}});
  }
  json j;
  j["selected"] = cubes;
  j["leftover_measure"] = diag.leftover_measure;
  j["leftover_neighborhood"] = diag.leftover_neighborhood;
  j["bound"] = diag.bound;
  j["boundary"] = diag.boundary;
  j["k0"] = diag.k0;
  j["provenance"] = "tiling.quasi_tile[" + path + "]";
  out.write_json("tile.json", j);
}

void cmd_verify(const Globals& g, const std::string& suite) {
  std::uint64_t seed = 0;
  SolverOptions opt;
  std::string out_dir = g.out;
  if (!g.config.empty()) {
    const Run run = make_run(g);
    seed = run.cfg.seed;
    opt = run.opt;
    out_dir = run.cfg.out_dir;
  } else {
    require(g.seed.has_value(), ErrorCode::config_invalid, "verify needs --seed or --config");
    seed = *g.seed;
    if (!g.mode.empty()) opt.mode = parse_mode(g.mode);
    if (g.threads > 0) set_thread_count(g.threads);
  }
  const std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
  CsvTable t({"suite", "check", "instances", "failures", "worst", "passed", "detail", "provenance"});
  bool ok = true;
  for (const std::string& name : names) {
    const SuiteReport rep = run_suite(name, seed, opt);
    for (const Check& c : rep.checks)
      t.add({rep.suite, c.name, std::to_string(c.instances), std::to_string(c.failures), format_number(c.worst),
             yes_no(c.passed()), c.detail, "harness." + rep.suite + "[seed=" + std::to_string(seed) + "]"});
    ok = ok && rep.passed();
  }
  Output(out_dir).write("verify_" + suite + ".csv", t.str());
  if (!ok) throw GatingFailure{"verification suite failed"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meandim: numerical lab for mean dimension with potential"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "experiment config (JSON)");
  app.add_option("--out", g.out, "output directory (default: stdout)");
  app.add_option("--seed", g.seed, "seed override");
  app.add_option("--mode", g.mode, "solver mode: exact or greedy");
  app.add_option("--threads", g.threads, "worker threads");

  std::function<void()> action;
  auto bind = [&action, &g](CLI::App* sub, void (*fn)(const Globals&)) {
    sub->callback([&action, &g, fn] { action = [&g, fn] { fn(g); }; });
  };
  bind(app.add_subcommand("system", "build the system and summarize it"), cmd_system);
  bind(app.add_subcommand("cover", "covering numbers with potential"), cmd_cover);
  bind(app.add_subcommand("hausdorff", "scale-eps Hausdorff values and dimension"), cmd_hausdorff);
  bind(app.add_subcommand("frostman", "Frostman measure by linear programming"), cmd_frostman);
  bind(app.add_subcommand("radist", "Blahut-Arimoto rate distortion sweep"), cmd_radist);
  bind(app.add_subcommand("rdim", "rate distortion dimension table"), cmd_rdim);
  bind(app.add_subcommand("local", "local formula report"), cmd_local);

  CLI::App* meandim = app.add_subcommand("meandim", "mean dimension sweep and verification");
  meandim->require_subcommand(1);
  bind(meandim->add_subcommand("sweep", "per-cell quantity table"), cmd_meandim_sweep);
  bind(meandim->add_subcommand("verify", "chain, nerve and variational checks"), cmd_meandim_verify);

  std::string instance;
  CLI::App* tile = app.add_subcommand("tile", "quasi-tiling of a box");
  tile->add_option("--instance", instance, "tile instance (JSON)");
  tile->callback([&] { action = [&] { cmd_tile(g, instance); }; });

  std::string suite;
  CLI::App* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("--suite", suite, "suite name or 'all'")->required();
  verify->callback([&] { action = [&] { cmd_verify(g, suite); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    action();
  } catch (const GatingFailure& f) {
    diagnose("GatingViolation", f.what, kExitGating);
    return kExitGating;
  } catch (const Error& e) {
    const int rc = exit_code_for(e.code());
    diagnose(std::string(to_string(e.code())), e.what(), rc);
    return rc;
  } catch (const std::exception& e) {
    diagnose("InternalError", e.what(), kExitOther);
    return kExitOther;
  }
  return kExitOk;
}
