#pragma once

#include "mdlab/metric.hpp"
#include "mdlab/system.hpp"

namespace mdlab {

// d_A(x, y) = sup_{u in A} d(T^u x, T^u y).
FiniteMetricSpace orbit_metric_sup(const SystemModel& sys, const GroupGrid& A);
// d_L = d_{[0, L)^d}.
FiniteMetricSpace orbit_metric_sup(const SystemModel& sys, int L);

// (1 / m(A)) sum_{u in A} w_u d(T^u x, T^u y).
FiniteMetricSpace orbit_metric_avg(const SystemModel& sys, const GroupGrid& A);
// Plain average over [0, L)^d for Z^d actions; quadrature over [0, L) for flows.
FiniteMetricSpace orbit_metric_avg(const SystemModel& sys, int L);

// phi_A(x) = sum_{u in A} w_u phi(T^u x).
PotentialField potential_integral(const SystemModel& sys, const GroupGrid& A);
PotentialField potential_integral(const SystemModel& sys, int L);

// The group grid standing for [0, L)^d in sys: lattice cube, or quadrature
// nodes with the flow's time step.
GroupGrid cube_grid(const SystemModel& sys, int L);

}  // namespace mdlab
