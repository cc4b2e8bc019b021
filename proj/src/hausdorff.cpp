#include "mdlab/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "mdlab/errors.hpp"
#include "mdlab/lp.hpp"

namespace mdlab {

namespace {

struct WeightedFamily {
  CoverFamily family;
  std::vector<std::vector<std::size_t>> incumbents;
};

// Ball family plus admissible extra sets plus the sets of admissible extra
// covers (each of which becomes an incumbent).
WeightedFamily build_family(const FiniteMetricSpace& m, const PotentialField& phi, double eps,
                            const std::vector<PointSet>& extra_sets, const std::vector<Cover>& extra_covers) {
  WeightedFamily wf;
  wf.family = ball_family(m, eps);
  std::map<PointSet, std::size_t> index;
  for (std::size_t s = 0; s < wf.family.size(); ++s) index.emplace(wf.family.sets[s], s);
  auto add = [&](PointSet s) -> std::size_t {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) return std::numeric_limits<std::size_t>::max();
    const double pd = m.padded_diameter(s);
    if (pd >= eps) return std::numeric_limits<std::size_t>::max();
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    index.emplace(s, wf.family.size());
    wf.family.add(std::move(s), pd);
    return wf.family.size() - 1;
  };
  for (const auto& s : extra_sets) add(s);
  std::vector<std::size_t> all(m.size());
  std::iota(all.begin(), all.end(), 0);
  for (const auto& cover : extra_covers) {
    if (!is_admissible_cover(m, all, cover, eps)) continue;
    std::vector<std::size_t> inc;
    for (const auto& s : cover) inc.push_back(add(s));
    std::sort(inc.begin(), inc.end());
    inc.erase(std::unique(inc.begin(), inc.end()), inc.end());
    wf.incumbents.push_back(std::move(inc));
  }
  wf.family.attach_potential(phi);
  return wf;
}

std::vector<double> hausdorff_weights(const CoverFamily& f, double s) {
  std::vector<double> w(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) w[k] = std::pow(f.diam[k], s - f.sup_phi[k]);
  return w;
}

double cover_sum(const FiniteMetricSpace& m, const PotentialField& phi, const Cover& cover, double s) {
  double total = 0.0;
  for (const auto& e : cover) total += std::pow(m.padded_diameter(e), s - phi.sup_on(e));
  return total;
}

void check_query(const FiniteMetricSpace& m, const PotentialField& phi, double eps) {
  require(phi.size() == m.size(), ErrorCode::invalid_argument, "potential size mismatch");
  require(m.size() > 0, ErrorCode::invalid_argument, "empty space");
  require(eps > 0.0 && eps <= 1.0, ErrorCode::invalid_argument, "Hausdorff quantities need 0 < eps <= 1");
  require(m.rho0() < eps, ErrorCode::infeasible, "rho0 >= eps: no admissible cover");
}

// Exact (or greedy) solve of the weighted problem at exponent s.
CoverSolution solve_at(const FiniteMetricSpace& m, const WeightedFamily& wf, double s, const SolverOptions& opt) {
  const auto w = hausdorff_weights(wf.family, s);
  const SetCoverResult r = solve_set_cover(m.size(), wf.family.sets, w, opt, wf.incumbents);
  CoverSolution out;
  out.chosen = r.chosen;
  out.value = r.value;
  out.optimal = r.optimal;
  for (std::size_t k : r.chosen) out.sets.push_back(wf.family.sets[k]);
  return out;
}

}  // namespace

double hausdorff_value(const FiniteMetricSpace& m, const PotentialField& phi, double eps, double s,
                       const SolverOptions& opt, const std::vector<PointSet>& extra_sets,
                       const std::vector<Cover>& extra_covers) {
  check_query(m, phi, eps);
  require(s > phi.max(), ErrorCode::invalid_exponent, "s must exceed max phi");
  const WeightedFamily wf = build_family(m, phi, eps, extra_sets, extra_covers);
  return solve_at(m, wf, s, opt).value;
}

DimhResult dimh_at_scale(const FiniteMetricSpace& m, const PotentialField& phi, double eps, const SolverOptions& opt,
                         const std::vector<PointSet>& extra_sets, const std::vector<Cover>& extra_covers) {
  check_query(m, phi, eps);
  const double base = phi.max();
  const WeightedFamily wf = build_family(m, phi, eps, extra_sets, extra_covers);
  DimhResult res;
  res.optimal = true;

  std::vector<Cover> pool;
  for (const auto& inc : wf.incumbents) {
    Cover c;
    for (std::size_t k : inc) c.push_back(wf.family.sets[k]);
    pool.push_back(std::move(c));
  }
  const bool exact = opt.mode == SolveMode::exact;
  if (!exact) {
    // A fixed pool of covers makes H(s) = min over the pool nonincreasing in s.
    static constexpr double grid[] = {0, 0.125, 0.25, 0.5, 0.75, 1, 1.5, 2, 3, 4, 6, 8, 12, 16, 24, 32, 64};
    for (double g : grid) pool.push_back(solve_at(m, wf, base + std::max(g, 1e-9), opt).sets);
    res.optimal = false;
  }
  auto H = [&](double s) {
    double best = std::numeric_limits<double>::infinity();
    if (exact) {
      const CoverSolution sol = solve_at(m, wf, s, opt);
      res.optimal = res.optimal && sol.optimal;
      best = sol.value;
    }
    for (const auto& c : pool) best = std::min(best, cover_sum(m, phi, c, s));
    return best;
  };

  res.pool = pool;
  if (H(base + 1e-9) < 1.0) {
    res.value = base;
    res.upper = base;
    return res;
  }
  double lo = base, hi = base + kDimhBracket;
  require(H(hi) < 1.0, ErrorCode::no_convergence, "H^s >= 1 at the top of the bisection bracket");
  while (hi - lo > kDimhTol) {
    const double mid = 0.5 * (lo + hi);
    if (H(mid) >= 1.0)
      lo = mid;
    else
      hi = mid;
  }
  res.value = lo;
  res.upper = hi;
  return res;
}

namespace {

// Enumerates the constraint family: all subsets (n <= 14) or the ball family,
// restricted to padded diameter < delta / 6.
std::vector<PointSet> frostman_family(const FiniteMetricSpace& m, double delta, bool& exhaustive) {
  const double cut = delta / 6.0;
  std::vector<PointSet> out;
  const std::size_t n = m.size();
  exhaustive = n <= kFrostmanExhaustiveMax;
  if (exhaustive) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      PointSet s;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) s.push_back(i);
      if (m.padded_diameter(s) < cut) out.push_back(std::move(s));
    }
    return out;
  }
  if (cut <= m.rho0()) return out;
  return ball_family(m, cut).sets;
}

double set_mass(const std::vector<double>& nu, const PointSet& s) {
  double v = 0.0;
  for (std::size_t p : s) v += nu[p];
  return v;
}

}  // namespace

double frostman_violation(const FiniteMetricSpace& m, const MeasureOnPoints& nu, double delta, double t,
                          std::size_t* checked) {
  bool exhaustive = false;
  const auto family = frostman_family(m, delta, exhaustive);
  if (checked) *checked = family.size();
  double worst = 0.0;
  for (const auto& s : family) worst = std::max(worst, set_mass(nu.weights, s) - std::pow(m.padded_diameter(s), t));
  return worst;
}

FrostmanResult frostman_measure(const FiniteMetricSpace& m, double delta, double t) {
  require(delta > 0.0, ErrorCode::invalid_argument, "frostman needs delta > 0");
  require(t >= 0.0, ErrorCode::invalid_argument, "frostman needs t >= 0");
  require(m.rho0() > 0.0 || t == 0.0, ErrorCode::invalid_argument, "frostman needs rho0 > 0 unless t = 0");
  const std::size_t n = m.size();
  FrostmanResult res;
  res.t = t;
  const auto family = frostman_family(m, delta, res.exhaustive);
  res.constraints_checked = family.size();
  std::vector<double> bound(family.size());
  for (std::size_t k = 0; k < family.size(); ++k) bound[k] = std::pow(m.padded_diameter(family[k]), t);

  std::vector<char> constrained(n, 0);
  for (const auto& s : family)
    for (std::size_t p : s) constrained[p] = 1;
  if (std::any_of(constrained.begin(), constrained.end(), [](char c) { return c == 0; })) {
    // Unbounded LP: points outside every constrained set can carry any mass.
    std::vector<double> w(n, 0.0);
    const double free_count = static_cast<double>(std::count(constrained.begin(), constrained.end(), 0));
    for (std::size_t i = 0; i < n; ++i)
      if (!constrained[i]) w[i] = 1.0 / free_count;
    res.nu = MeasureOnPoints(std::move(w));
    res.lp_optimum = std::numeric_limits<double>::infinity();
    return res;
  }

  // Row generation: start from singleton constraints, add the most violated
  // constraints until none is violated.
  std::vector<std::size_t> active;
  std::set<std::size_t> in_active;
  for (std::size_t k = 0; k < family.size(); ++k)
    if (family[k].size() == 1) {
      active.push_back(k);
      in_active.insert(k);
    }
  LpResult lp;
  for (;;) {
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (std::size_t k : active) {
      std::vector<double> row(n, 0.0);
      for (std::size_t p : family[k]) row[p] = 1.0;
      A.push_back(std::move(row));
      b.push_back(bound[k]);
    }
    lp = simplex_maximize(A, b, std::vector<double>(n, 1.0));
    require(lp.status == LpResult::Status::optimal, ErrorCode::invalid_argument, "frostman LP unexpectedly unbounded");
    std::vector<std::pair<double, std::size_t>> violated;
    for (std::size_t k = 0; k < family.size(); ++k) {
      if (in_active.count(k)) continue;
      const double excess = set_mass(lp.x, family[k]) - bound[k];
      if (excess > 1e-12 * std::max(1.0, bound[k])) violated.emplace_back(-excess, k);
    }
    if (violated.empty()) break;
    std::sort(violated.begin(), violated.end());
    const std::size_t take = std::min<std::size_t>(violated.size(), std::max<std::size_t>(8, n / 2));
    for (std::size_t v = 0; v < take; ++v) {
      active.push_back(violated[v].second);
      in_active.insert(violated[v].second);
    }
  }
  res.lp_optimum = lp.value;
  for (std::size_t k = 0; k < family.size(); ++k)
    if (std::abs(set_mass(lp.x, family[k]) - bound[k]) <= 1e-9 * std::max(1.0, bound[k])) res.binding.push_back(family[k]);
  if (lp.value < 1.0 - 1e-12)
    fail(ErrorCode::infeasible, "Infeasible(t = " + std::to_string(t) + "): LP optimum " + std::to_string(lp.value) +
                                    " < 1");
  std::vector<double> w = lp.x;
  for (double& v : w) v /= lp.value;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  res.nu = MeasureOnPoints(std::move(w));
  return res;
}

}  // namespace mdlab
