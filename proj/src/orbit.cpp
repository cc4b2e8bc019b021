#include "mdlab/orbit.hpp"

#include <algorithm>

#include "mdlab/errors.hpp"
#include "mdlab/parallel.hpp"

namespace mdlab {

namespace {

template <class Reduce>
FiniteMetricSpace orbit_metric(const SystemModel& sys, const GroupGrid& A, Reduce reduce) {
  require(!A.nodes.empty(), ErrorCode::invalid_argument, "orbit metric over an empty group set");
  sys.check_applicable(A);
  const std::size_t n = sys.size();
  std::vector<double> dist(n * n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = reduce(i, j);
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist[j * n + i] = dist[i * n + j];
  return FiniteMetricSpace(n, std::move(dist), sys.rho0());
}

}  // namespace

GroupGrid cube_grid(const SystemModel& sys, int L) {
  require(L >= 1, ErrorCode::invalid_argument, "cube side must be >= 1");
  if (sys.kind() == SystemKind::flow) return GroupGrid::quadrature_cube(sys.rank(), L, sys.flow_params().tau);
  return GroupGrid::lattice_cube(sys.rank(), L);
}

FiniteMetricSpace orbit_metric_sup(const SystemModel& sys, const GroupGrid& A) {
  return orbit_metric(sys, A, [&](std::size_t i, std::size_t j) {
    double best = 0.0;
    for (const auto& u : A.nodes) best = std::max(best, sys.distance_at(u, i, j));
    return best;
  });
}

FiniteMetricSpace orbit_metric_sup(const SystemModel& sys, int L) { return orbit_metric_sup(sys, cube_grid(sys, L)); }

FiniteMetricSpace orbit_metric_avg(const SystemModel& sys, const GroupGrid& A) {
  const double m = A.measure();
  require(m > 0.0, ErrorCode::invalid_argument, "average over a null group set");
  return orbit_metric(sys, A, [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (const auto& u : A.nodes) s += u.weight * sys.distance_at(u, i, j);
    return s / m;
  });
}

FiniteMetricSpace orbit_metric_avg(const SystemModel& sys, int L) { return orbit_metric_avg(sys, cube_grid(sys, L)); }

PotentialField potential_integral(const SystemModel& sys, const GroupGrid& A) {
  sys.check_applicable(A);
  std::vector<double> values(sys.size(), 0.0);
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (const auto& u : A.nodes) values[i] += u.weight * sys.potential_at(u, i);
  return PotentialField{std::move(values)};
}

PotentialField potential_integral(const SystemModel& sys, int L) {
  return potential_integral(sys, cube_grid(sys, L));
}

}  // namespace mdlab
