#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mdlab/metric.hpp"
#include "mdlab/system.hpp"

namespace mdlab {

enum class SolveMode { exact, greedy };

SolveMode parse_mode(const std::string& s);
std::string to_string(SolveMode m);

struct SolverOptions {
  SolveMode mode = SolveMode::exact;
  double time_limit = 60.0;     // seconds per exact solve
  std::size_t max_sets = 2500;  // exact solver cutoff, after dominance removal
};

// Candidate sets over the points 0..n-1 of a metric space.
struct CoverFamily {
  std::vector<PointSet> sets;   // sorted point indices
  std::vector<double> diam;     // padded diameter diam(E) + rho0
  std::vector<double> sup_phi;  // filled by attach_potential

  std::size_t size() const { return sets.size(); }
  void add(PointSet set, double padded_diam);
  void attach_potential(const PotentialField& phi);
};

struct CoverSolution {
  std::vector<std::size_t> chosen;  // indices into the family
  std::vector<PointSet> sets;       // the chosen sets themselves
  double value = 0.0;
  bool optimal = false;
};

// Weighted set cover over elements 0..universe-1.
struct SetCoverResult {
  std::vector<std::size_t> chosen;
  double value = 0.0;
  bool optimal = false;
};

// Exact branch-and-bound (or greedy) weighted set cover. Each incumbent is a
// list of set indices forming a cover; the best incumbent seeds the upper
// bound, so the returned value never exceeds any incumbent. Throws Infeasible
// if the sets do not cover the universe.
SetCoverResult solve_set_cover(std::size_t universe, const std::vector<PointSet>& sets,
                               const std::vector<double>& weights, const SolverOptions& opt,
                               const std::vector<std::vector<std::size_t>>& incumbents = {});

// Per-point sorted neighbor lists (distance < radius), reusable across
// subsets of the same space.
struct NearLists {
  double radius = 0.0;
  std::vector<std::vector<std::pair<double, std::size_t>>> near;

  NearLists(const FiniteMetricSpace& m, double radius);
};

// Distinct closed balls {y : d(x, y) <= rho} (x a point, rho a realized
// distance) with padded diameter < eps.
CoverFamily ball_family(const FiniteMetricSpace& m, double eps);
// Balls of the subspace on `subset`; sets are expressed in the indices of m.
CoverFamily ball_family(const FiniteMetricSpace& m, const NearLists& near, std::span<const std::size_t> subset,
                        double eps);

// Checks that `sets` covers `points` with padded diameters < eps.
bool is_admissible_cover(const FiniteMetricSpace& m, std::span<const std::size_t> points,
                         const std::vector<PointSet>& sets, double eps);

CoverSolution min_cover(const FiniteMetricSpace& m, const CoverFamily& f, double eps, const SolverOptions& opt);

// Minimizes sum (1/eps)^{sup_U phi} over covers drawn from the ball family
// plus `extra_sets` (each checked for admissibility; inadmissible ones are
// dropped). Extra sets that themselves form a cover act as incumbents.
CoverSolution covering_number_potential(const FiniteMetricSpace& m, const PotentialField& phi, double eps,
                                        const SolverOptions& opt,
                                        const std::vector<PointSet>& extra_sets = {});

// Same, for the subspace on `subset` (points of E); sets use indices of m.
CoverSolution covering_number_potential(const FiniteMetricSpace& m, const NearLists& near,
                                        std::span<const std::size_t> subset, const PotentialField& phi,
                                        double eps, const SolverOptions& opt,
                                        const std::vector<PointSet>& extra_sets = {});

enum class OrbitMetricKind { sup, avg };

struct CoverRow {
  int L = 0;
  double eps = 0.0;
  OrbitMetricKind metric = OrbitMetricKind::sup;
  bool resolved = true;  // false when eps <= rho0 (no admissible cover)
  double value = 0.0;
  double log_value = 0.0;   // log2
  double normalized = 0.0;  // log_value / (L^d log2(1/eps))
  bool optimal = false;
};

// log #(X, d_L, phi_L, eps) over the grids.
std::vector<CoverRow> covering_table(const SystemModel& sys, const std::vector<int>& L_grid,
                                     const std::vector<double>& eps_grid, OrbitMetricKind metric,
                                     const SolverOptions& opt);

}  // namespace mdlab
