#include "mdlab/meandim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "mdlab/errors.hpp"
#include "mdlab/orbit.hpp"
#include "mdlab/parallel.hpp"

namespace mdlab {

bool NerveComplex::has_face(const std::vector<std::size_t>& face) const {
  std::vector<std::size_t> f(face);
  std::sort(f.begin(), f.end());
  for (const auto& m : maximal_faces)
    if (std::includes(m.begin(), m.end(), f.begin(), f.end())) return true;
  return f.empty();
}

int NerveComplex::dimension() const {
  int d = -1;
  for (const auto& m : maximal_faces) d = std::max(d, static_cast<int>(m.size()) - 1);
  return d;
}

std::vector<std::pair<std::size_t, std::size_t>> NerveComplex::edges() const {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (const auto& m : maximal_faces)
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b) out.emplace(m[a], m[b]);
  return {out.begin(), out.end()};
}

NerveComplex nerve_of_cover(const FiniteMetricSpace& m, const std::vector<PointSet>& cover, double eps) {
  NerveComplex nc;
  nc.vertices = cover.size();
  nc.carriers.assign(m.size(), {});
  for (std::size_t i = 0; i < cover.size(); ++i) {
    require(!cover[i].empty(), ErrorCode::not_a_cover, "empty cover set");
    require(m.padded_diameter(cover[i]) < eps, ErrorCode::not_a_cover,
            "cover set " + std::to_string(i) + " has padded diameter >= eps");
    for (std::size_t p : cover[i]) {
      require(p < m.size(), ErrorCode::not_a_cover, "cover set leaves the space");
      nc.carriers[p].push_back(i);
    }
  }
  std::set<std::vector<std::size_t>> distinct;
  for (std::size_t p = 0; p < m.size(); ++p) {
    require(!nc.carriers[p].empty(), ErrorCode::not_a_cover, "point " + std::to_string(p) + " is not covered");
    distinct.insert(nc.carriers[p]);
  }
  // Maximal carriers: not strictly contained in another carrier.
  std::vector<std::vector<std::size_t>> all(distinct.begin(), distinct.end());
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  for (const auto& c : all) {
    bool contained = false;
    for (const auto& k : nc.maximal_faces)
      if (k.size() > c.size() && std::includes(k.begin(), k.end(), c.begin(), c.end())) {
        contained = true;
        break;
      }
    if (!contained) nc.maximal_faces.push_back(c);
  }
  std::sort(nc.maximal_faces.begin(), nc.maximal_faces.end());
  return nc;
}

WidimBound widim_upper(const FiniteMetricSpace& m, const PotentialField& phi, double eps,
                       const std::vector<PointSet>& cover) {
  require(phi.size() == m.size(), ErrorCode::invalid_argument, "potential size mismatch");
  const NerveComplex nc = nerve_of_cover(m, cover, eps);
  WidimBound b;
  b.widim = -std::numeric_limits<double>::infinity();
  b.widim_prime = b.widim;
  for (std::size_t x = 0; x < m.size(); ++x) {
    const auto& c = nc.carriers[x];
    std::size_t top = c.size();
    for (const auto& f : nc.maximal_faces)
      if (f.size() > top && std::includes(f.begin(), f.end(), c.begin(), c.end())) top = f.size();
    b.widim = std::max(b.widim, static_cast<double>(top) - 1.0 + phi[x]);
    b.widim_prime = std::max(b.widim_prime, static_cast<double>(c.size()) - 1.0 + phi[x]);
  }
  return b;
}

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::widim: return "widim";
    case Quantity::widim_prime: return "widim_prime";
    case Quantity::log_cover: return "log_cover";
    case Quantity::dimh_sup: return "dimh_sup";
    case Quantity::dimh_L1: return "dimh_L1";
  }
  return "widim";
}

std::optional<std::pair<int, double>> finest_cell(const SystemModel& sys, const std::vector<int>& L_grid,
                                                  const std::vector<double>& eps_grid) {
  std::optional<double> eps;
  for (double e : eps_grid)
    if (e > sys.rho0() && (!eps || e < *eps)) eps = e;
  if (!eps || L_grid.empty()) return std::nullopt;
  return std::make_pair(*std::max_element(L_grid.begin(), L_grid.end()), *eps);
}

namespace {

double intercept_in_inverse_L(const std::vector<std::pair<int, double>>& pts) {
  if (pts.size() < 2) return pts.empty() ? 0.0 : pts.front().second;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (auto [L, v] : pts) {
    const double x = 1.0 / L;
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
  }
  const double n = static_cast<double>(pts.size());
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-15) return sy / n;
  const double slope = (n * sxy - sx * sy) / den;
  return (sy - slope * sx) / n;
}

}  // namespace

SweepTable mdim_sweep(const SystemModel& sys, const std::vector<double>& eps_grid, const std::vector<int>& L_grid,
                      const SolverOptions& opt) {
  require(!eps_grid.empty() && !L_grid.empty(), ErrorCode::invalid_argument, "sweep grids must be nonempty");
  SweepTable table;
  constexpr Quantity kAll[] = {Quantity::widim, Quantity::widim_prime, Quantity::log_cover, Quantity::dimh_sup,
                               Quantity::dimh_L1};
  for (int L : L_grid) {
    const FiniteMetricSpace dl = orbit_metric_sup(sys, L);
    const FiniteMetricSpace dbar = orbit_metric_avg(sys, L);
    const PotentialField phi = potential_integral(sys, L);
    const double vol = std::pow(static_cast<double>(L), sys.rank());
    for (double eps : eps_grid) {
      auto emit = [&](Quantity q, double value, double normalized, bool optimal, bool resolved,
                      const std::string& note = {}) {
        table.rows.push_back({L, eps, q, value, normalized, optimal, resolved, note});
      };
      if (eps <= dl.rho0() || eps >= 1.0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (Quantity q : kAll) emit(q, nan, nan, false, false, "unresolved: eps <= rho0");
        continue;
      }
      const double l = std::log2(1.0 / eps);
      const CoverSolution cover = covering_number_potential(dl, phi, eps, opt);
      const double log_cover = std::log2(cover.value);
      const WidimBound wb = widim_upper(dl, phi, eps, cover.sets);
      const double var = variation(phi, dl, eps);

      const DimhResult hs = dimh_at_scale(dl, phi, eps, opt, {}, {cover.sets});
      std::vector<Cover> l1_covers = hs.pool;
      l1_covers.push_back(cover.sets);
      const DimhResult h1 = dimh_at_scale(dbar, phi, eps, opt, ball_family(dl, eps).sets, l1_covers);

      emit(Quantity::widim, wb.widim, wb.widim / vol, cover.optimal, true);
      emit(Quantity::widim_prime, wb.widim_prime, wb.widim_prime / vol, cover.optimal, true);
      emit(Quantity::log_cover, log_cover, log_cover / (vol * l), cover.optimal, true);
      emit(Quantity::dimh_sup, hs.value, hs.value / vol, hs.optimal, true);
      emit(Quantity::dimh_L1, h1.value, h1.value / vol, h1.optimal, true);

      std::ostringstream cell;
      cell << "L=" << L << " eps=" << eps;
      if (!(h1.value <= hs.value && hs.value <= log_cover / l)) {
        table.chain_ok = false;
        table.violations.push_back("chain " + cell.str());
      }
      if (!(wb.widim_prime <= wb.widim && wb.widim <= wb.widim_prime + var + 1e-12)) {
        table.nerve_ok = false;
        table.violations.push_back("nerve " + cell.str());
      }
    }
  }
  const auto fine = finest_cell(sys, L_grid, eps_grid);
  if (fine) {
    for (Quantity q : kAll) {
      SweepSummaryEntry e;
      std::vector<std::pair<int, double>> pts;
      for (const auto& r : table.rows) {
        if (r.quantity != q || r.eps != fine->second || !r.resolved) continue;
        pts.emplace_back(r.L, r.normalized);
        if (r.L == fine->first) {
          e.estimate = r.normalized;
          e.optimal = r.optimal;
        }
      }
      e.L = fine->first;
      e.eps = fine->second;
      e.extrapolated = intercept_in_inverse_L(pts);
      table.summary[to_string(q)] = e;
    }
  }
  return table;
}

PointSet delta_fiber(const FiniteMetricSpace& dA, std::size_t x, double delta) {
  require(x < dA.size(), ErrorCode::invalid_argument, "fiber center out of range");
  PointSet out;
  const auto row = dA.row(x);
  for (std::size_t y = 0; y < dA.size(); ++y)
    if (row[y] <= delta) out.push_back(y);
  return out;
}

PointSet delta_fiber(const SystemModel& sys, std::size_t x, double delta, const GroupGrid& A) {
  sys.check_applicable(A);
  require(x < sys.size(), ErrorCode::invalid_argument, "fiber center out of range");
  PointSet out;
  for (std::size_t y = 0; y < sys.size(); ++y) {
    bool inside = true;
    for (const auto& u : A.nodes)
      if (sys.distance_at(u, x, y) > delta) {
        inside = false;
        break;
      }
    if (inside) out.push_back(y);
  }
  return out;
}

ScaleContext::ScaleContext(const SystemModel& sys, int L_, double eps_)
    : L(L_),
      eps(eps_),
      volume(std::pow(static_cast<double>(L_), sys.rank())),
      dl(orbit_metric_sup(sys, L_)),
      phi(potential_integral(sys, L_)),
      near(dl, eps_ - dl.rho0()) {}

PtValue p_t(const std::vector<ScaleContext>& ctx, const PointSet& E, const SolverOptions& opt,
            const std::vector<std::vector<PointSet>>& extra_sets) {
  require(!E.empty(), ErrorCode::invalid_argument, "P_T needs a nonempty set");
  require(!ctx.empty(), ErrorCode::invalid_argument, "P_T needs at least one L");
  PtValue out;
  out.value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    const auto& c = ctx[k];
    static const std::vector<PointSet> none;
    const auto& extra = k < extra_sets.size() ? extra_sets[k] : none;
    const CoverSolution sol = covering_number_potential(c.dl, c.near, E, c.phi, c.eps, opt, extra);
    const double v = std::log2(sol.value) / c.volume;
    out.per_L.push_back(v);
    out.value = std::min(out.value, v);
    out.optimal = out.optimal && sol.optimal;
  }
  return out;
}

PtValue p_t(const SystemModel& sys, const PointSet& E, double eps, const std::vector<int>& L_grid,
            const SolverOptions& opt) {
  std::vector<ScaleContext> ctx;
  for (int L : L_grid) ctx.emplace_back(sys, L, eps);
  return p_t(ctx, E, opt);
}

LocalFormulaReport local_formula_report(const SystemModel& sys, double delta, const std::vector<double>& eps_grid,
                                        const std::vector<int>& L_grid, const SolverOptions& opt) {
  require(!L_grid.empty() && !eps_grid.empty(), ErrorCode::invalid_argument, "local formula grids must be nonempty");
  const int side = sys.budget() > 0 ? sys.budget() : *std::max_element(L_grid.begin(), L_grid.end());
  const FiniteMetricSpace dA = orbit_metric_sup(sys, cube_grid(sys, side));
  std::set<PointSet> unique;
  std::vector<PointSet> fibers;
  std::vector<std::size_t> centers;
  for (std::size_t x = 0; x < sys.size(); ++x) {
    PointSet f = delta_fiber(dA, x, delta);
    if (unique.insert(f).second) {
      fibers.push_back(std::move(f));
      centers.push_back(x);
    }
  }
  LocalFormulaReport rep;
  PointSet all(sys.size());
  std::iota(all.begin(), all.end(), 0);
  double finest = std::numeric_limits<double>::infinity();
  for (double eps : eps_grid) {
    LocalFormulaRow row;
    row.eps = eps;
    row.fibers = fibers.size();
    if (eps <= sys.rho0() || eps >= 1.0) {
      row.resolved = false;
      rep.rows.push_back(row);
      continue;
    }
    std::vector<ScaleContext> ctx;
    for (int L : L_grid) ctx.emplace_back(sys, L, eps);
    // Global covers restricted to a fiber seed the fiber problems, so the
    // comparison is family-relative.
    std::vector<std::vector<PointSet>> global_sets;
    row.global = std::numeric_limits<double>::infinity();
    for (const auto& c : ctx) {
      const CoverSolution sol = covering_number_potential(c.dl, c.near, all, c.phi, eps, opt);
      row.global = std::min(row.global, std::log2(sol.value) / c.volume);
      global_sets.push_back(sol.sets);
    }
    std::vector<double> local(fibers.size(), 0.0);
    parallel_for(fibers.size(), [&](std::size_t k) { local[k] = p_t(ctx, fibers[k], opt, global_sets).value; });
    row.local = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < fibers.size(); ++k)
      if (local[k] > row.local) {
        row.local = local[k];
        row.argmax = centers[k];
      }
    row.ratio = row.global > 0.0 ? row.local / row.global : 1.0;
    row.ok = row.local <= row.global + 1e-6;
    rep.ok = rep.ok && row.ok;
    if (eps < finest) {
      finest = eps;
      rep.finest_ratio = row.ratio;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

VariationalReport variational_report(const SystemModel& sys, const std::vector<MeasureOnPoints>& measures,
                                     const std::vector<double>& eps_grid, const std::vector<int>& L_grid,
                                     const SolverOptions& opt, const std::vector<int>& rd_L_list) {
  for (std::size_t k = 0; k < measures.size(); ++k)
    require(is_invariant(sys, measures[k], 1e-9), ErrorCode::non_invariant_measure,
            "measure " + std::to_string(k) + " is not invariant");
  VariationalReport rep;
  const SweepTable table = mdim_sweep(sys, eps_grid, std::vector<int>{*std::max_element(L_grid.begin(), L_grid.end())}, opt);
  for (double eps : eps_grid) {
    VariationalRow row;
    row.eps = eps;
    for (const auto& r : table.rows) {
      if (r.eps != eps) continue;
      row.resolved = r.resolved;
      if (r.quantity == Quantity::widim) row.mdim_est = r.normalized;
      if (r.quantity == Quantity::dimh_L1) row.dimh_L1_est = r.normalized;
    }
    if (row.resolved) {
      row.gating_ok = row.mdim_est <= row.dimh_L1_est + 1e-9;
      rep.ok = rep.ok && row.gating_ok;
    }
    rep.rows.push_back(row);
  }
  std::vector<double> rd_eps;
  for (double e : eps_grid)
    if (e > 0.0 && e < 1.0) rd_eps.push_back(e);
  std::sort(rd_eps.rbegin(), rd_eps.rend());
  rep.best_rate_side = -std::numeric_limits<double>::infinity();
  for (const auto& mu : measures) {
    const double integral = mu.integrate(sys.potential());
    double slope = 0.0;
    if (rd_eps.size() >= 3) slope = rdim_estimate(sys, mu, rd_eps, rd_L_list).lsq_slope;
    rep.integrals.push_back(integral);
    rep.rdim_plus_integral.push_back(slope + integral);
    rep.best_rate_side = std::max(rep.best_rate_side, slope + integral);
  }
  return rep;
}

bool widim_hausdorff_hypothesis(const FiniteMetricSpace& m, const PotentialField& phi, double s, int N, double Lip,
                                const SolverOptions& opt, double* lhs) {
  require(s > phi.max(), ErrorCode::invalid_exponent, "s must exceed max phi");
  require(N >= 0 && Lip >= 0.0, ErrorCode::invalid_argument, "hypothesis needs N >= 0 and Lip >= 0");
  const double h = m.rho0() < 1.0 ? hausdorff_value(m, phi, 1.0, s, opt) : std::numeric_limits<double>::infinity();
  const double v = std::pow(4.0, N) * std::pow(Lip + 1.0, 1.0 + s + phi.sup_norm()) * h;
  if (lhs) *lhs = v;
  return v < 1.0;
}

}  // namespace mdlab
