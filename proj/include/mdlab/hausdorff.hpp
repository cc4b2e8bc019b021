#pragma once

#include <vector>

#include "mdlab/cover.hpp"
#include "mdlab/metric.hpp"
#include "mdlab/system.hpp"

namespace mdlab {

using Cover = std::vector<PointSet>;

// Family-relative H^s_eps(X, d, phi): infimum of sum diam^(E)^{s - sup_E phi}
// over covers drawn from the ball family plus extra_sets (exact or greedy),
// never above any admissible cover in extra_covers.
double hausdorff_value(const FiniteMetricSpace& m, const PotentialField& phi, double eps, double s,
                       const SolverOptions& opt, const std::vector<PointSet>& extra_sets = {},
                       const std::vector<Cover>& extra_covers = {});

struct DimhResult {
  double value = 0.0;  // certified: H^value >= 1 (or value = max phi)
  double upper = 0.0;  // H^upper < 1
  bool optimal = false;
  std::vector<Cover> pool;  // covers evaluated (greedy mode), reusable as incumbents
};

inline constexpr double kDimhBracket = 64.0;
inline constexpr double kDimhTol = 1e-4;

// inf{s > max phi : H^s_eps < 1} by bisection over [max phi, max phi + 64].
DimhResult dimh_at_scale(const FiniteMetricSpace& m, const PotentialField& phi, double eps, const SolverOptions& opt,
                         const std::vector<PointSet>& extra_sets = {}, const std::vector<Cover>& extra_covers = {});

struct FrostmanResult {
  MeasureOnPoints nu;
  double t = 0.0;
  double lp_optimum = 0.0;
  std::vector<PointSet> binding;  // constraints tight at the LP optimum
  std::size_t constraints_checked = 0;
  bool exhaustive = false;  // all subsets (n <= 14) or balls only
};

inline constexpr std::size_t kFrostmanExhaustiveMax = 14;

// Maximizes sum nu(x) subject to nu(E) <= diam^(E)^t for every constrained E
// with diam^(E) < delta / 6; rescales to a probability measure when the
// optimum is >= 1, else throws Infeasible.
FrostmanResult frostman_measure(const FiniteMetricSpace& m, double delta, double t);

// Largest violation of nu(E) <= diam^(E)^t over the constraint family (0 if none).
double frostman_violation(const FiniteMetricSpace& m, const MeasureOnPoints& nu, double delta, double t,
                          std::size_t* checked = nullptr);

}  // namespace mdlab
