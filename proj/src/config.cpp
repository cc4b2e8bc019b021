#include "mdlab/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mdlab/errors.hpp"

namespace mdlab {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { fail(ErrorCode::config_invalid, what); }

void check(bool cond, const std::string& what) {
  if (!cond) invalid(what);
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
std::vector<T> grid(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  const json& v = j.at(key);
  check(v.is_array(), std::string("grid '") + key + "' must be an array");
  try {
    return v.get<std::vector<T>>();
  } catch (const json::exception&) {
    invalid(std::string("grid '") + key + "' has the wrong element type");
  }
}

void parse_system(const json& s, ExperimentConfig& cfg) {
  check(s.is_object(), "'system' must be an object");
  cfg.system_kind = get_or<std::string>(s, "kind", "shift");
  if (s.contains("potential")) {
    const json& p = s.at("potential");
    if (p.is_string()) {
      cfg.potential = PotentialSpec::parse(p.get<std::string>());
    } else {
      check(p.is_object(), "'potential' must be a name or an object");
      cfg.potential = PotentialSpec::parse(get_or<std::string>(p, "name", "zero"), get_or<double>(p, "c", 0.0));
    }
  }
  if (cfg.system_kind == "shift") {
    ShiftParams& sp = cfg.shift;
    sp.q = get_or<int>(s, "q", sp.q);
    sp.d = get_or<int>(s, "d", sp.d);
    sp.r = get_or<int>(s, "r", sp.r);
    sp.Lmax = get_or<int>(s, "Lmax", sp.Lmax);
    sp.decay = get_or<double>(s, "decay", sp.decay);
    sp.rho0 = get_or<double>(s, "rho0", sp.rho0);
    check(sp.q >= 2, "shift needs q >= 2");
    check(sp.d == 1 || sp.d == 2, "shift rank must be 1 or 2");
    check(sp.r >= 0 && sp.Lmax >= 1, "shift needs r >= 0 and Lmax >= 1");
    check(sp.decay > 0.0 && sp.decay < 1.0, "decay must lie in (0, 1)");
  } else if (cfg.system_kind == "flow") {
    FlowParams& fp = cfg.flow;
    fp.alpha = get_or<double>(s, "alpha", fp.alpha);
    fp.n_points = get_or<std::size_t>(s, "n_points", fp.n_points);
    fp.tau = get_or<double>(s, "tau", fp.tau);
    cfg.reduce = get_or<bool>(s, "reduce", false);
    check(fp.n_points >= 2, "flow needs n_points >= 2");
    check(fp.tau > 0.0, "flow needs tau > 0");
  } else {
    invalid("unknown system kind '" + cfg.system_kind + "'");
  }
  cfg.canonical = s.dump();
}

void parse_measures(const json& m, ExperimentConfig& cfg) {
  check(m.is_array(), "'measures' must be an array");
  for (const json& e : m) {
    MeasureSpec spec;
    if (e.is_string()) {
      spec.kind = e.get<std::string>();
    } else {
      check(e.is_object(), "each measure must be a name or an object");
      spec.kind = get_or<std::string>(e, "kind", "product");
      spec.marginal = grid<double>(e, "marginal");
    }
    check(spec.kind == "product" || spec.kind == "random_product" || spec.kind == "uniform",
          "unknown measure kind '" + spec.kind + "'");
    for (double w : spec.marginal) check(std::isfinite(w) && w >= 0.0, "measure weights must be >= 0");
    cfg.measures.push_back(std::move(spec));
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    invalid(std::string("malformed JSON: ") + e.what());
  }
  check(j.is_object(), "config must be a JSON object");
  static const std::set<std::string> known{"system", "quantities", "grids", "measures", "seed", "output", "mode",
                                           "threads", "delta", "frostman", "metric_L", "budget"};
  for (const auto& [key, value] : j.items()) check(known.count(key) > 0, "unknown config key '" + key + "'");

  ExperimentConfig cfg;
  check(j.contains("system"), "config needs a 'system' block");
  parse_system(j.at("system"), cfg);

  check(j.contains("quantities"), "config needs a 'quantities' list");
  cfg.quantities = grid<std::string>(j, "quantities");
  check(!cfg.quantities.empty(), "quantity list is empty");
  parse_quantities(cfg.quantities);

  check(j.contains("grids") && j.at("grids").is_object(), "config needs a 'grids' object");
  const json& g = j.at("grids");
  cfg.L_grid = grid<int>(g, "L");
  cfg.eps_grid = grid<double>(g, "eps");
  cfg.beta_grid = grid<double>(g, "beta");
  cfg.s_grid = grid<double>(g, "s");
  check(!cfg.L_grid.empty(), "L grid is empty");
  check(!cfg.eps_grid.empty(), "eps grid is empty");
  for (int L : cfg.L_grid) check(L >= 1, "L grid entries must be >= 1");
  for (double e : cfg.eps_grid) check(e > 0.0 && e < 1.0, "eps grid entries must lie in (0, 1)");
  for (double b : cfg.beta_grid) check(b >= 0.0, "beta grid entries must be >= 0");
  if (cfg.system_kind == "shift")
    for (int L : cfg.L_grid) check(L <= cfg.shift.Lmax, "L grid exceeds the shift window budget Lmax");

  if (j.contains("measures")) parse_measures(j.at("measures"), cfg);

  check(j.contains("seed"), "config needs a 'seed'");
  cfg.seed = get_or<std::uint64_t>(j, "seed", 0);
  if (j.contains("output")) {
    const json& o = j.at("output");
    check(o.is_object(), "'output' must be an object");
    cfg.out_dir = get_or<std::string>(o, "dir", "");
  }
  if (j.contains("mode")) {
    const auto name = get_or<std::string>(j, "mode", "exact");
    check(name == "exact" || name == "greedy", "mode must be 'exact' or 'greedy'");
    cfg.mode = parse_mode(name);
  }
  cfg.threads = get_or<std::size_t>(j, "threads", 1);
  check(cfg.threads >= 1, "threads must be >= 1");
  cfg.delta = get_or<double>(j, "delta", cfg.delta);
  check(cfg.delta > 0.0, "delta must be > 0");
  cfg.metric_L = get_or<int>(j, "metric_L", 0);
  check(cfg.metric_L >= 0, "metric_L must be >= 0");
  if (cfg.system_kind == "shift") check(cfg.metric_L <= cfg.shift.Lmax, "metric_L exceeds Lmax");
  if (j.contains("frostman")) {
    const json& f = j.at("frostman");
    check(f.is_object(), "'frostman' must be an object");
    cfg.frostman_delta = get_or<double>(f, "delta", cfg.frostman_delta);
    cfg.frostman_t = get_or<double>(f, "t", cfg.frostman_t);
    check(cfg.frostman_delta > 0.0 && cfg.frostman_t >= 0.0, "frostman needs delta > 0 and t >= 0");
  }
  if (j.contains("budget")) {
    const json& b = j.at("budget");
    check(b.is_object(), "'budget' must be an object");
    cfg.max_points = get_or<std::size_t>(b, "max_points", cfg.max_points);
    cfg.time_limit = get_or<double>(b, "time_limit", cfg.time_limit);
    check(cfg.max_points >= 1 && cfg.time_limit > 0.0, "budget values must be positive");
  }
  cfg.shift.cap = cfg.max_points;
  return cfg;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  check(static_cast<bool>(in), "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::array<double, 2> point(const json& j, int d, const char* what) {
  check(j.is_array() && j.size() == static_cast<std::size_t>(d), std::string(what) + " needs d coordinates");
  std::array<double, 2> p{0.0, 0.0};
  for (int i = 0; i < d; ++i) {
    check(j[static_cast<std::size_t>(i)].is_number(), std::string(what) + " coordinates must be numbers");
    p[static_cast<std::size_t>(i)] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return p;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

TileInstance parse_tile_instance(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    invalid(std::string("malformed JSON: ") + e.what());
  }
  check(j.is_object(), "tile instance must be a JSON object");
  TileInstance t;
  t.d = get_or<int>(j, "d", 1);
  check(t.d == 1 || t.d == 2, "tile instances need d in {1, 2}");
  check(j.contains("A") && j.at("A").is_object(), "tile instance needs A = {lo, hi}");
  t.A.lo = point(j.at("A").value("lo", json()), t.d, "A.lo");
  t.A.hi = point(j.at("A").value("hi", json()), t.d, "A.hi");
  check(j.contains("families") && j.at("families").is_array() && !j.at("families").empty(),
        "tile instance needs a nonempty 'families' list");
  for (const json& fam : j.at("families")) {
    check(fam.is_array(), "each family must be a list of cubes");
    std::vector<Cube> cubes;
    for (const json& c : fam) {
      check(c.is_object(), "each cube must be {corner, side}");
      Cube cube;
      cube.corner = point(c.value("corner", json()), t.d, "corner");
      cube.side = get_or<double>(c, "side", 0.0);
      check(cube.side > 0.0, "cube side must be > 0");
      cubes.push_back(cube);
    }
    t.families.push_back(std::move(cubes));
  }
  t.eta = get_or<double>(j, "eta", t.eta);
  check(t.eta > 0.0, "eta must be > 0");
  t.k0 = get_or<std::size_t>(j, "k0", t.families.size());
  check(t.k0 >= 1 && t.k0 <= t.families.size(), "k0 must lie in [1, number of families]");
  t.families.resize(t.k0);
  t.options.check_hypotheses = get_or<bool>(j, "check_hypotheses", true);
  t.options.separation = get_or<double>(j, "separation", 0.0);
  return t;
}

TileInstance load_tile_instance(const std::string& path) { return parse_tile_instance(read_file(path)); }

SolverOptions solver_options(const ExperimentConfig& cfg) {
  SolverOptions opt;
  opt.mode = cfg.mode;
  opt.time_limit = cfg.time_limit;
  return opt;
}

std::vector<Quantity> parse_quantities(const std::vector<std::string>& names) {
  static const std::vector<Quantity> all{Quantity::widim, Quantity::widim_prime, Quantity::log_cover,
                                         Quantity::dimh_sup, Quantity::dimh_L1};
  std::vector<Quantity> out;
  for (const std::string& n : names) {
    bool found = false;
    for (Quantity q : all)
      if (to_string(q) == n) {
        out.push_back(q);
        found = true;
      }
    check(found, "unknown quantity '" + n + "'");
  }
  return out;
}

SystemModel build_system(const ExperimentConfig& cfg) {
  if (cfg.system_kind == "shift") {
    try {
      return SystemModel::shift(cfg.shift, cfg.potential);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::cap_exceeded) fail(ErrorCode::budget_exceeded, e.what());
      throw;
    }
  }
  require(cfg.flow.n_points <= cfg.max_points, ErrorCode::budget_exceeded, "flow sample count exceeds max_points");
  SystemModel flow = SystemModel::rotation_flow(cfg.flow, cfg.potential);
  return cfg.reduce ? zd_reduction(flow) : flow;
}

std::vector<MeasureOnPoints> build_measures(const ExperimentConfig& cfg, const SystemModel& sys) {
  std::vector<MeasureOnPoints> out;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (const MeasureSpec& spec : cfg.measures) {
    if (spec.kind == "uniform") {
      out.emplace_back(std::vector<double>(sys.size(), 1.0 / static_cast<double>(sys.size())));
      continue;
    }
    check(sys.kind() == SystemKind::shift, "product measures need a shift model");
    const std::size_t q = static_cast<std::size_t>(sys.shift_params().q);
    std::vector<double> w = spec.marginal;
    if (spec.kind == "random_product") {
      w.resize(q);
      for (double& v : w) v = unit(rng);
    }
    if (w.empty()) w.assign(q, 1.0);
    check(w.size() == q, "product marginal needs q weights");
    out.push_back(product_measure(sys, Pmf::normalized(w)));
  }
  return out;
}

}  // namespace mdlab
