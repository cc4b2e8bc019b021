#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mdlab {

// Absolute tolerance for symmetry / triangle checks on computed metrics.
inline constexpr double kMetricTol = 1e-9;

using PointSet = std::vector<std::size_t>;

// Dense finite metric (or pseudo-metric) space with a resolution floor.
//
// rho0 is the mesh at which the finite set stands in for a continuum. Every
// diameter used by the covering and Hausdorff code is the padded diameter
// diam(E) + rho0, so a singleton never has size zero unless rho0 == 0.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  FiniteMetricSpace(std::size_t n, std::vector<double> dist, double rho0);

  static FiniteMetricSpace from_function(std::size_t n,
                                         const std::function<double(std::size_t, std::size_t)>& d,
                                         double rho0);

  std::size_t size() const { return n_; }
  double rho0() const { return rho0_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {dist_.data() + i * n_, n_}; }
  const std::vector<double>& data() const { return dist_; }

  double diameter(std::span<const std::size_t> set) const;
  double padded_diameter(std::span<const std::size_t> set) const { return diameter(set) + rho0_; }
  double spatial_diameter() const;
  double min_positive_distance() const;

  // Sub-space on the listed points, in the listed order.
  FiniteMetricSpace restrict_to(std::span<const std::size_t> points) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> dist_;
  double rho0_ = 0.0;
};

struct PotentialField {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double max() const;
  double min() const;
  double sup_on(std::span<const std::size_t> set) const;
  double sup_norm() const;
  PotentialField restrict_to(std::span<const std::size_t> points) const;

  static PotentialField zeros(std::size_t n) { return {std::vector<double>(n, 0.0)}; }
  static PotentialField constant(std::size_t n, double c) { return {std::vector<double>(n, c)}; }
};

// Node of a group grid: a lattice vector of Z^d (integer coordinates) or a
// quadrature node of R^d with its cell volume.
struct GridNode {
  std::array<double, 2> u{0.0, 0.0};
  double weight = 1.0;
};

// Finite stand-in for a bounded Borel set A: lattice points (weight 1 each) or
// uniform quadrature nodes whose weights sum to m(A).
struct GroupGrid {
  int rank = 1;
  bool lattice = true;
  std::vector<GridNode> nodes;

  double measure() const;
  std::size_t size() const { return nodes.size(); }

  // [lo, hi) box of Z^d, rank 1 or 2.
  static GroupGrid lattice_box(int rank, std::array<int, 2> lo, std::array<int, 2> hi);
  // [0, L)^d of Z^d.
  static GroupGrid lattice_cube(int rank, int L);
  static GroupGrid lattice_points(int rank, const std::vector<std::array<int, 2>>& points);
  // Left Riemann nodes of [0, L)^d with spacing tau (rank 1 or 2).
  static GroupGrid quadrature_cube(int rank, double L, double tau);

  GroupGrid translated(std::array<double, 2> a) const;
  // Union of two lattice grids (duplicates removed).
  GroupGrid united(const GroupGrid& other) const;
  bool contains_lattice(std::array<int, 2> v) const;
};

struct MetricViolation {
  enum class Kind { diagonal, negative, symmetry, triangle, rho0 } kind;
  std::size_t i = 0, j = 0, k = 0;
  double amount = 0.0;
  std::string describe() const;
};

std::vector<MetricViolation> validate_metric(const FiniteMetricSpace& m, double tol = kMetricTol);

// sup{|phi(x) - phi(y)| : d(x, y) < eps}.
double variation(const PotentialField& phi, const FiniteMetricSpace& m, double eps);

}  // namespace mdlab
