#include "mdlab/errors.hpp"

namespace mdlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::window_exceeded: return "WindowExceeded";
    case ErrorCode::cap_exceeded: return "CapExceeded";
    case ErrorCode::incompatible_grid: return "IncompatibleGrid";
    case ErrorCode::degenerate_metric: return "DegenerateMetric";
    case ErrorCode::infeasible: return "Infeasible";
    case ErrorCode::invalid_exponent: return "InvalidExponent";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::nonpositive_b: return "NonpositiveB";
    case ErrorCode::feasibility_violated: return "FeasibilityViolated";
    case ErrorCode::not_a_cover: return "NotACover";
    case ErrorCode::non_invariant_measure: return "NonInvariantMeasure";
    case ErrorCode::hypothesis_violated: return "HypothesisViolated";
    case ErrorCode::selection_failed: return "SelectionFailed";
    case ErrorCode::negative_potential: return "NegativePotential";
    case ErrorCode::not_covering: return "NotCovering";
    case ErrorCode::unbounded_region: return "UnboundedRegion";
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

}  // namespace mdlab
