#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mdlab/info.hpp"
#include "mdlab/metric.hpp"

namespace mdlab {

inline constexpr std::size_t kDefaultPointCap = 20000;

enum class SystemKind { shift, flow, map };

enum class PotentialKind { zero, constant, coord0, sine };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::zero;
  double c = 0.0;

  static PotentialSpec parse(const std::string& name, double c = 0.0);
  std::string name() const;
};

struct ShiftParams {
  int q = 2;
  int d = 1;
  int r = 0;
  int Lmax = 1;
  double decay = 0.5;
  // Negative means the default 1 / (2q), the covering radius of a q-level
  // quantization of [0, 1].
  double rho0 = -1.0;
  std::size_t cap = kDefaultPointCap;
};

struct FlowParams {
  double alpha = 1.0;
  std::size_t n_points = 360;
  double tau = 0.1;
};

struct MeasureOnPoints {
  std::vector<double> weights;

  MeasureOnPoints() = default;
  explicit MeasureOnPoints(std::vector<double> w);  // validates normalization

  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }
  Pmf as_pmf() const { return Pmf(weights); }
  double integrate(const PotentialField& f) const;
};

// Finite window model of a Z^d action (full shift, or a point map iterated),
// or of an R action sampled by quadrature (rotation flow).
//
// Shift points are configurations on W = [-r, Lmax - 1 + r]^d, enumerated
// lexicographically with the first coordinate most significant. T^u x is
// represented implicitly: the base metric and the potential are evaluated at
// coordinate offset u, which is exact for u in [0, Lmax)^d.
class SystemModel {
 public:
  static SystemModel shift(const ShiftParams& p, const PotentialSpec& phi);
  static SystemModel rotation_flow(const FlowParams& p, const PotentialSpec& phi);
  // Z action generated by a permutation of the points.
  static SystemModel point_map(FiniteMetricSpace base, PotentialField phi, std::vector<std::size_t> step);

  SystemKind kind() const { return kind_; }
  int rank() const { return rank_; }
  std::size_t size() const { return n_; }
  double rho0() const { return base_.rho0(); }
  const FiniteMetricSpace& base_metric() const { return base_; }
  const PotentialField& potential() const { return phi_; }
  const PotentialSpec& potential_spec() const { return phi_spec_; }

  // Largest side L such that orbit operations over [0, L)^d are exact; 0 means
  // no limit (flows and point maps).
  int budget() const { return kind_ == SystemKind::shift ? shift_.Lmax : 0; }
  // Throws WindowExceeded unless every node of A is applicable.
  void check_applicable(const GroupGrid& A) const;

  double distance_at(const GridNode& u, std::size_t i, std::size_t j) const;
  double potential_at(const GridNode& u, std::size_t i) const;
  // Image of point i under T^u (flows and maps); throws for shifts.
  std::size_t act(const GridNode& u, std::size_t i) const;

  // Shift accessors.
  const ShiftParams& shift_params() const { return shift_; }
  const FlowParams& flow_params() const { return flow_; }
  int window_lo() const { return -shift_.r; }
  int window_side() const { return side_; }
  std::size_t window_size() const { return cells_; }
  // Symbol of configuration i at coordinate w (absolute, w in W).
  int symbol(std::size_t i, std::array<int, 2> w) const;
  std::size_t index_of(const std::vector<int>& symbols) const;
  // Configuration y with y_v = x_{v + a} where v + a lies in W, 0 elsewhere.
  std::size_t translate(std::size_t i, std::array<int, 2> a) const;

 private:
  double shift_distance(std::array<int, 2> u, std::size_t i, std::size_t j) const;
  std::size_t cell_of(std::array<int, 2> w) const;
  std::size_t flow_step(double t) const;

  SystemKind kind_ = SystemKind::shift;
  int rank_ = 1;
  std::size_t n_ = 0;
  FiniteMetricSpace base_;
  PotentialField phi_;
  PotentialSpec phi_spec_;

  ShiftParams shift_;
  int side_ = 0;
  std::size_t cells_ = 0;
  std::vector<std::uint8_t> symbols_;

  FlowParams flow_;
  std::vector<std::size_t> step_;  // point map generator
};

SystemModel build_shift(int q, int d, int r, int Lmax, double weight_decay,
                        const PotentialSpec& phi = {}, double rho0 = -1.0,
                        std::size_t cap = kDefaultPointCap);
SystemModel build_rotation_flow(double alpha, std::size_t n_points, double tau,
                                const PotentialSpec& phi = {});

// Z^d restriction of an R^d flow with base metric the unit-box average of the
// flow metric and potential the unit-box integral of phi.
SystemModel zd_reduction(const SystemModel& flow);

// d'(x, y) = sum_n 2^-n |d(x, x_n) - d(y, x_n)| with x_1, x_2, ... the points
// in enumeration order.
FiniteMetricSpace tame_metric(const FiniteMetricSpace& m);

MeasureOnPoints product_measure(const SystemModel& sys, const Pmf& marginal);

// Largest deviation between the law of a pattern and the law of its unit
// translates (shifts), or between mu and mu o T^-1 (point maps).
double invariance_defect(const SystemModel& sys, const MeasureOnPoints& mu);
bool is_invariant(const SystemModel& sys, const MeasureOnPoints& mu, double tol = 1e-12);

}  // namespace mdlab
