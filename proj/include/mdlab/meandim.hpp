#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdlab/cover.hpp"
#include "mdlab/hausdorff.hpp"
#include "mdlab/metric.hpp"
#include "mdlab/ratedist.hpp"
#include "mdlab/system.hpp"

namespace mdlab {

// Nerve of a cover, restricted to faces witnessed by points: the faces are the
// subsets of the carriers carrier(x) = {i : x in U_i}.
struct NerveComplex {
  std::size_t vertices = 0;
  std::vector<std::vector<std::size_t>> carriers;       // per point, sorted
  std::vector<std::vector<std::size_t>> maximal_faces;  // maximal carriers, sorted

  bool has_face(const std::vector<std::size_t>& face) const;
  int dimension() const;
  // Edges {i, j} of the 1-skeleton, i < j.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
};

// Throws NotACover unless the sets cover every point with padded diameter < eps.
NerveComplex nerve_of_cover(const FiniteMetricSpace& m, const std::vector<PointSet>& cover, double eps);

struct WidimBound {
  double widim = 0.0;        // max_x (max dim of a maximal face containing carrier(x) + phi(x))
  double widim_prime = 0.0;  // max_x (|carrier(x)| - 1 + phi(x))
};

WidimBound widim_upper(const FiniteMetricSpace& m, const PotentialField& phi, double eps,
                       const std::vector<PointSet>& cover);

enum class Quantity { widim, widim_prime, log_cover, dimh_sup, dimh_L1 };
std::string to_string(Quantity q);

struct SweepRow {
  int L = 0;
  double eps = 0.0;
  Quantity quantity = Quantity::widim;
  double value = 0.0;
  double normalized = 0.0;
  bool optimal = false;
  bool resolved = true;
  std::string note;
};

struct SweepSummaryEntry {
  double estimate = 0.0;      // normalized value at the finest cell
  double extrapolated = 0.0;  // intercept of normalized vs 1/L at the finest eps
  int L = 0;
  double eps = 0.0;
  bool optimal = false;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::map<std::string, SweepSummaryEntry> summary;
  // Per-cell chain checks on resolved cells.
  bool chain_ok = true;   // dimh_L1 <= dimh_sup <= log# / log(1/eps)
  bool nerve_ok = true;   // widim' <= widim <= widim' + var_eps
  std::vector<std::string> violations;
};

// The finest cell: largest L at the smallest eps with eps > rho0.
std::optional<std::pair<int, double>> finest_cell(const SystemModel& sys, const std::vector<int>& L_grid,
                                                  const std::vector<double>& eps_grid);

SweepTable mdim_sweep(const SystemModel& sys, const std::vector<double>& eps_grid, const std::vector<int>& L_grid,
                      const SolverOptions& opt);

// {y : d(T^u x, T^u y) <= delta for all u in A}.
PointSet delta_fiber(const SystemModel& sys, std::size_t x, double delta, const GroupGrid& A);
PointSet delta_fiber(const FiniteMetricSpace& dA, std::size_t x, double delta);

// Precomputed orbit data for one eps and a list of L.
struct ScaleContext {
  int L = 0;
  double eps = 0.0;
  double volume = 1.0;  // L^d
  FiniteMetricSpace dl;
  PotentialField phi;
  NearLists near;

  ScaleContext(const SystemModel& sys, int L, double eps);
};

struct PtValue {
  double value = 0.0;         // min over L of log2 # / L^d
  std::vector<double> per_L;  // log2 # / L^d
  bool optimal = true;
};

// P_T(E, d, phi, eps) proxy: min over the contexts of log2 #(E, d_L, phi_L, eps) / L^d.
// extra_sets[k] are offered to the solver of context k (may be empty).
PtValue p_t(const std::vector<ScaleContext>& ctx, const PointSet& E, const SolverOptions& opt,
            const std::vector<std::vector<PointSet>>& extra_sets = {});
PtValue p_t(const SystemModel& sys, const PointSet& E, double eps, const std::vector<int>& L_grid,
            const SolverOptions& opt);

struct LocalFormulaRow {
  double eps = 0.0;
  double local = 0.0;   // sup_x P_T(fiber(x))
  double global = 0.0;  // P_T(X)
  double ratio = 0.0;   // local / global (1 if global == 0)
  std::size_t argmax = 0;
  std::size_t fibers = 0;
  bool resolved = true;
  bool ok = true;       // local <= global + 1e-6
};

struct LocalFormulaReport {
  std::vector<LocalFormulaRow> rows;
  bool ok = true;
  double finest_ratio = 0.0;
};

LocalFormulaReport local_formula_report(const SystemModel& sys, double delta, const std::vector<double>& eps_grid,
                                        const std::vector<int>& L_grid, const SolverOptions& opt);

struct VariationalRow {
  double eps = 0.0;
  double mdim_est = 0.0;     // widim / L^d at the largest L
  double dimh_L1_est = 0.0;  // dimh_L1 / L^d at the largest L
  bool gating_ok = true;     // mdim_est <= dimh_L1_est + 1e-9
  bool resolved = true;
};

struct VariationalReport {
  std::vector<VariationalRow> rows;
  std::vector<double> rdim_plus_integral;  // per measure: lsq rdim slope + int phi dmu
  std::vector<double> integrals;
  double best_rate_side = 0.0;
  bool ok = true;
};

VariationalReport variational_report(const SystemModel& sys, const std::vector<MeasureOnPoints>& measures,
                                     const std::vector<double>& eps_grid, const std::vector<int>& L_grid,
                                     const SolverOptions& opt, const std::vector<int>& rd_L_list = {1});

// 4^N (Lip + 1)^{1 + s + |phi|_inf} H^s_1(X, d, phi) < 1.
bool widim_hausdorff_hypothesis(const FiniteMetricSpace& m, const PotentialField& phi, double s, int N, double Lip,
                                const SolverOptions& opt, double* lhs = nullptr);

}  // namespace mdlab
