#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mdlab/cover.hpp"
#include "mdlab/metric.hpp"
#include "mdlab/system.hpp"

namespace mdlab {

// Axis-aligned box [lo, hi) of R^d, d in {1, 2}. Unused coordinates are 0.
struct Box {
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};
};

// Cube u + [0, side)^d. Cubes are half-open so exact tilings are disjoint.
struct Cube {
  std::array<double, 2> corner{0.0, 0.0};
  double side = 1.0;

  Box box(int d) const;
};

struct BoxUnion {
  int d = 1;
  std::vector<Box> boxes;

  static BoxUnion single(int d, const Box& b);
  // Union of unit cells u + [0, 1)^d over the lattice nodes of A.
  static BoxUnion cells(const GroupGrid& A);
};

bool intersects(const Box& a, const Box& b, int d);
bool contains(const Box& outer, const Box& inner, int d);

// Exact measures of box unions by coordinate compression; throws
// UnboundedRegion on non-finite or inverted boxes.
double measure(const BoxUnion& A);
// m(B_r(A)) with B_r(A) = {x : |x - y|_inf <= r for some y in A}.
double neighborhood_measure(const BoxUnion& A, double r);
// m(d(A, r)): points within r of both A and its complement.
double boundary_measure(const BoxUnion& A, double r);

// Occupancy raster of B_r(A) on a uniform grid of step h.
struct RasterRegion {
  int d = 1;
  Box bbox;
  double h = 0.0;
  std::array<std::size_t, 2> shape{0, 1};
  std::vector<unsigned char> occupied;  // row-major, first coordinate most significant
  double measure = 0.0;                 // occupied cells * h^d
  double exact_measure = 0.0;           // interval arithmetic value
  double error_bound = 0.0;             // cells next to an occupancy change * h^d
};

// h <= 0 selects (smallest box side) / 64.
RasterRegion neighborhood(const BoxUnion& A, double r, double h = 0.0);

struct TileOptions {
  bool check_hypotheses = true;
  // Scale separation factor of hypothesis (1); <= 0 means the number of families.
  double separation = 0.0;
};

struct TileDiagnostics {
  double leftover_measure = 0.0;      // m(A minus the selection)
  double leftover_neighborhood = 0.0; // m(B_1(A minus the selection))
  double bound = 0.0;                 // eta * m(A)
  double boundary = 0.0;              // m(d(A, l_max(C_k0)))
  std::size_t k0 = 0;
};

// Greedy selection from the largest scale down: at each scale, cubes inside A
// disjoint from earlier picks, in lexicographic corner order. Throws
// HypothesisViolated if a hypothesis fails (when checked) and SelectionFailed
// if the leftover neighborhood bound is not met.
std::vector<Cube> quasi_tile(int d, const Box& A, const std::vector<std::vector<Cube>>& families, double eta,
                             const TileOptions& opt = {}, TileDiagnostics* diag = nullptr);

// Throws HypothesisViolated naming the first failed hypothesis.
void check_tile_hypotheses(int d, const Box& A, const std::vector<std::vector<Cube>>& families, double eta,
                           double separation);

struct BlockCodingCheck {
  double lhs = 0.0;  // #(E, d_A, phi_A, eps)
  double rhs = 0.0;  // product over parts of #(E, d_Ak, phi_Ak, eps)
  std::vector<double> part_values;
  bool optimal = true;
  bool ok = false;   // lhs <= rhs (1 + 1e-9)
};

// Lattice A and parts; throws NegativePotential if phi < 0 somewhere and
// NotCovering unless A is inside the union of the parts.
BlockCodingCheck block_coding_check(const SystemModel& sys, const PointSet& E, const GroupGrid& A,
                                    const std::vector<GroupGrid>& parts, double eps, const SolverOptions& opt = {});

struct CrudeEstimateCheck {
  double log_lhs = 0.0;   // log2 #(X, d_A, phi_A, eps)
  double log_base = 0.0;  // log2 #(X, d_{[0,1]^d}, phi_{[0,1]^d}, eps)
  double exponent = 0.0;  // m(B_1(A)) for the cell union of A
  double log_rhs = 0.0;   // exponent * log_base
  bool optimal = true;
  bool ok = false;        // log_lhs <= log_rhs + 1e-9
};

CrudeEstimateCheck crude_estimate_check(const SystemModel& sys, const GroupGrid& A, double eps,
                                        const SolverOptions& opt = {});

// Fixed-scale version of the Bowen-type estimate on a shift: a is the largest
// per-fiber P_T over fibers of d_{[0, Lmax)^d} divided by log2(1/eps), and the
// left side is the largest log2 # of a delta-fiber of d_{[-r, L + r)^d} under
// (d_L, phi_L). Non-gating report.
struct BowenReport {
  double a = 0.0;
  double log_lhs = 0.0;
  double log_rhs = 0.0;  // (a + beta) L^d log2(1/eps)
  int L = 0;
  int D = 0;
  bool holds = false;
};

BowenReport bowen_report(const SystemModel& sys, double delta, double beta, double eps, int L,
                         const std::vector<int>& L_grid, const SolverOptions& opt = {});

}  // namespace mdlab
