#include "mdlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "mdlab/errors.hpp"

namespace mdlab {

FiniteMetricSpace::FiniteMetricSpace(std::size_t n, std::vector<double> dist, double rho0)
    : n_(n), dist_(std::move(dist)), rho0_(rho0) {
  require(dist_.size() == n * n, ErrorCode::invalid_argument, "distance matrix must be n*n");
  require(rho0 >= 0.0 && std::isfinite(rho0), ErrorCode::invalid_argument, "rho0 must be >= 0");
}

FiniteMetricSpace FiniteMetricSpace::from_function(
    std::size_t n, const std::function<double(std::size_t, std::size_t)>& d, double rho0) {
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = d(i, j);
      dist[i * n + j] = v;
      dist[j * n + i] = v;
    }
  }
  return FiniteMetricSpace(n, std::move(dist), rho0);
}

double FiniteMetricSpace::diameter(std::span<const std::size_t> set) const {
  double best = 0.0;
  for (std::size_t a = 0; a < set.size(); ++a) {
    const double* r = dist_.data() + set[a] * n_;
    for (std::size_t b = a + 1; b < set.size(); ++b) best = std::max(best, r[set[b]]);
  }
  return best;
}

double FiniteMetricSpace::spatial_diameter() const {
  double best = 0.0;
  for (double v : dist_) best = std::max(best, v);
  return best;
}

double FiniteMetricSpace::min_positive_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (double v : dist_)
    if (v > 0.0) best = std::min(best, v);
  return best;
}

FiniteMetricSpace FiniteMetricSpace::restrict_to(std::span<const std::size_t> points) const {
  const std::size_t m = points.size();
  std::vector<double> dist(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    const double* r = dist_.data() + points[a] * n_;
    for (std::size_t b = 0; b < m; ++b) dist[a * m + b] = r[points[b]];
  }
  return FiniteMetricSpace(m, std::move(dist), rho0_);
}

double PotentialField::max() const {
  double best = -std::numeric_limits<double>::infinity();
  for (double v : values) best = std::max(best, v);
  return best;
}

double PotentialField::min() const {
  double best = std::numeric_limits<double>::infinity();
  for (double v : values) best = std::min(best, v);
  return best;
}

double PotentialField::sup_on(std::span<const std::size_t> set) const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i : set) best = std::max(best, values[i]);
  return best;
}

double PotentialField::sup_norm() const {
  double best = 0.0;
  for (double v : values) best = std::max(best, std::abs(v));
  return best;
}

PotentialField PotentialField::restrict_to(std::span<const std::size_t> points) const {
  PotentialField out;
  out.values.reserve(points.size());
  for (std::size_t i : points) out.values.push_back(values[i]);
  return out;
}

double GroupGrid::measure() const {
  double m = 0.0;
  for (const auto& n : nodes) m += n.weight;
  return m;
}

GroupGrid GroupGrid::lattice_box(int rank, std::array<int, 2> lo, std::array<int, 2> hi) {
  require(rank == 1 || rank == 2, ErrorCode::invalid_argument, "group rank must be 1 or 2");
  GroupGrid g;
  g.rank = rank;
  g.lattice = true;
  const int lo1 = rank == 2 ? lo[1] : 0;
  const int hi1 = rank == 2 ? hi[1] : 1;
  for (int a = lo[0]; a < hi[0]; ++a)
    for (int b = lo1; b < hi1; ++b)
      g.nodes.push_back({{static_cast<double>(a), static_cast<double>(b)}, 1.0});
  return g;
}

GroupGrid GroupGrid::lattice_cube(int rank, int L) { return lattice_box(rank, {0, 0}, {L, L}); }

GroupGrid GroupGrid::lattice_points(int rank, const std::vector<std::array<int, 2>>& points) {
  require(rank == 1 || rank == 2, ErrorCode::invalid_argument, "group rank must be 1 or 2");
  GroupGrid g;
  g.rank = rank;
  std::set<std::array<int, 2>> seen;
  for (auto p : points) {
    if (rank == 1) p[1] = 0;
    if (!seen.insert(p).second) continue;
    g.nodes.push_back({{static_cast<double>(p[0]), static_cast<double>(p[1])}, 1.0});
  }
  return g;
}

GroupGrid GroupGrid::quadrature_cube(int rank, double L, double tau) {
  require(rank == 1 || rank == 2, ErrorCode::invalid_argument, "group rank must be 1 or 2");
  require(L > 0.0 && tau > 0.0, ErrorCode::invalid_argument, "quadrature needs L > 0 and tau > 0");
  const double steps = L / tau;
  const auto k = static_cast<long>(std::llround(steps));
  require(k >= 1 && std::abs(steps - static_cast<double>(k)) < 1e-9 * std::max(1.0, steps),
          ErrorCode::incompatible_grid, "tau must divide L");
  GroupGrid g;
  g.rank = rank;
  g.lattice = false;
  const double w = rank == 1 ? tau : tau * tau;
  const long k1 = rank == 2 ? k : 1;
  for (long a = 0; a < k; ++a)
    for (long b = 0; b < k1; ++b)
      g.nodes.push_back({{static_cast<double>(a) * tau, static_cast<double>(b) * tau}, w});
  return g;
}

GroupGrid GroupGrid::translated(std::array<double, 2> a) const {
  GroupGrid g = *this;
  for (auto& n : g.nodes) {
    n.u[0] += a[0];
    if (rank == 2) n.u[1] += a[1];
  }
  return g;
}

GroupGrid GroupGrid::united(const GroupGrid& other) const {
  require(lattice && other.lattice && rank == other.rank, ErrorCode::invalid_argument,
          "union is defined for lattice grids of equal rank");
  std::vector<std::array<int, 2>> pts;
  for (const auto* g : {this, &other})
    for (const auto& n : g->nodes)
      pts.push_back({static_cast<int>(std::lround(n.u[0])), static_cast<int>(std::lround(n.u[1]))});
  return lattice_points(rank, pts);
}

bool GroupGrid::contains_lattice(std::array<int, 2> v) const {
  for (const auto& n : nodes)
    if (std::lround(n.u[0]) == v[0] && (rank == 1 || std::lround(n.u[1]) == v[1])) return true;
  return false;
}

std::string MetricViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::diagonal: os << "diagonal d(" << i << "," << i << ") != 0"; break;
    case Kind::negative: os << "negative d(" << i << "," << j << ")"; break;
    case Kind::symmetry: os << "symmetry d(" << i << "," << j << ") != d(" << j << "," << i << ")"; break;
    case Kind::triangle:
      os << "triangle d(" << i << "," << k << ") > d(" << i << "," << j << ") + d(" << j << "," << k << ")";
      break;
    case Kind::rho0: os << "rho0 < 0"; break;
  }
  os << " by " << amount;
  return os.str();
}

std::vector<MetricViolation> validate_metric(const FiniteMetricSpace& m, double tol) {
  std::vector<MetricViolation> out;
  using K = MetricViolation::Kind;
  if (m.rho0() < 0.0) out.push_back({K::rho0, 0, 0, 0, -m.rho0()});
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(m(i, i)) > tol) out.push_back({K::diagonal, i, i, 0, std::abs(m(i, i))});
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) < -tol) out.push_back({K::negative, i, j, 0, -m(i, j)});
      if (j > i && std::abs(m(i, j) - m(j, i)) > tol)
        out.push_back({K::symmetry, i, j, 0, std::abs(m(i, j) - m(j, i))});
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double excess = m(i, k) - m(i, j) - m(j, k);
        if (excess > tol) out.push_back({K::triangle, i, j, k, excess});
      }
  return out;
}

double variation(const PotentialField& phi, const FiniteMetricSpace& m, double eps) {
  require(eps > 0.0, ErrorCode::invalid_argument, "variation needs eps > 0");
  double best = 0.0;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = m.row(i);
    for (std::size_t j = i + 1; j < n; ++j)
      if (r[j] < eps) best = std::max(best, std::abs(phi[i] - phi[j]));
  }
  return best;
}

}  // namespace mdlab
