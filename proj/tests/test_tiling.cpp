#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mdlab/errors.hpp"
#include "mdlab/tiling.hpp"
#include "oracles.hpp"

using namespace mdlab;
using oracle::near;

namespace {

Box interval(double a, double b) { return Box{{a, 0.0}, {b, 0.0}}; }

std::vector<Cube> unit_cells(double lo, double hi) {
  std::vector<Cube> out;
  for (double x = lo; x < hi; x += 1.0) out.push_back(Cube{{x, 0.0}, 1.0});
  return out;
}

// Measure of A minus a union of disjoint subintervals of A.
double leftover_1d(const Box& A, const std::vector<Cube>& cubes) {
  double covered = 0.0;
  for (const Cube& c : cubes) covered += c.side;
  return (A.hi[0] - A.lo[0]) - covered;
}

}  // namespace

TEST_CASE("boundary and neighborhood measures") {
  const BoxUnion A = BoxUnion::single(1, interval(0, 10));
  CHECK(near(boundary_measure(A, 1.0), 4.0, 1e-12));
  CHECK(near(neighborhood_measure(A, 1.0), 12.0, 1e-12));
  CHECK(near(boundary_measure(A, 0.0), 0.0, 1e-12));

  // each unit interval [a, a+1]: points within 1 of it and of its complement fill [a-1, a+2]
  const BoxUnion two{1, {interval(0, 1), interval(11, 12)}};
  CHECK(near(boundary_measure(two, 1.0), 2 * 3.0, 1e-12));
  CHECK(near(neighborhood_measure(two, 1.0), 2 * 3.0, 1e-12));

  // 2 x 3 rectangle: B_1 is 4 x 5 = 20, erosion is empty so the boundary is all of B_1
  const BoxUnion rect = BoxUnion::single(2, Box{{0, 0}, {2, 3}});
  CHECK(near(neighborhood_measure(rect, 1.0), 20.0, 1e-12));
  CHECK(near(boundary_measure(rect, 1.0), 20.0, 1e-12));
  CHECK(neighborhood_measure(rect, 1.0) <= measure(rect) + boundary_measure(rect, 1.0) + 1e-12);

  CHECK_THROWS_AS(measure(BoxUnion::single(1, interval(0, INFINITY))), Error);
}

TEST_CASE("raster neighborhood tracks the exact measure") {
  const BoxUnion A{2, {Box{{0, 0}, {2, 1}}, Box{{1, 1}, {3, 3}}}};
  const RasterRegion r = neighborhood(A, 0.5);
  CHECK(near(r.exact_measure, neighborhood_measure(A, 0.5), 1e-12));
  CHECK(std::abs(r.measure - r.exact_measure) <= r.error_bound + 1e-12);
}

TEST_CASE("quasi_tile") {
  SUBCASE("exact unit tiling") {
    const Box A = interval(0, 20);
    TileOptions off;
    off.check_hypotheses = false;
    TileDiagnostics diag;
    const auto picked = quasi_tile(1, A, {unit_cells(0, 20)}, 0.05, off, &diag);
    CHECK(picked.size() == 20);
    CHECK(diag.leftover_measure == 0.0);
    // with eta = 0.9 the boundary hypothesis holds: m(d(A, 1)) = 4 < 0.3 * 20
    CHECK(quasi_tile(1, A, {unit_cells(0, 20)}, 0.9).size() == 20);
  }
  SUBCASE("single cube equal to A") {
    const Box A = interval(0, 8);
    // a cube as large as A can never meet the boundary hypothesis
    TileOptions off;
    off.check_hypotheses = false;
    const auto picked = quasi_tile(1, A, {{Cube{{0, 0}, 8.0}}}, 0.5, off);
    REQUIRE(picked.size() == 1);
    CHECK(picked[0].side == 8.0);
  }
  SUBCASE("two scales on [0, 100]") {
    const Box A = interval(0, 100);
    std::vector<Cube> tens;
    for (int i = 0; i < 10; ++i) tens.push_back(Cube{{10.0 * i, 0.0}, 10.0});
    const std::vector<std::vector<Cube>> fams{unit_cells(0, 100), tens};
    // m(d(A, 10)) = 40 is not below (eta / 3) m(A)
    CHECK_THROWS_AS(quasi_tile(1, A, fams, 0.5), Error);
    TileOptions off;
    off.check_hypotheses = false;
    const auto picked = quasi_tile(1, A, fams, 0.5, off);
    CHECK(leftover_1d(A, picked) <= 0.01 * 100.0);
    for (std::size_t i = 0; i < picked.size(); ++i)
      for (std::size_t j = i + 1; j < picked.size(); ++j) CHECK_FALSE(intersects(picked[i].box(1), picked[j].box(1), 1));
  }
}

TEST_CASE("block coding and crude estimate") {
  const SystemModel sys = build_shift(2, 1, 0, 2, 0.5);
  PointSet all(sys.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const GroupGrid A = GroupGrid::lattice_cube(1, 2);

  const BlockCodingCheck same = block_coding_check(sys, all, A, {A}, 0.5);
  CHECK(near(same.lhs, same.rhs, 1e-12));

  // blocks are 1 apart: # over [0, 2) is 2^2, over each unit part 2
  const BlockCodingCheck split = block_coding_check(
      sys, all, A, {GroupGrid::lattice_points(1, {{0, 0}}), GroupGrid::lattice_points(1, {{1, 0}})}, 0.5);
  CHECK(near(split.lhs, 4.0, 1e-12));
  CHECK(near(split.rhs, 4.0, 1e-12));
  CHECK(split.ok);

  CHECK_THROWS_AS(block_coding_check(sys, all, A, {GroupGrid::lattice_points(1, {{0, 0}})}, 0.5), Error);
  const SystemModel neg = build_shift(2, 1, 0, 2, 0.5, PotentialSpec::parse("const", -1.0));
  CHECK_THROWS_AS(block_coding_check(neg, all, A, {A}, 0.5), Error);

  const CrudeEstimateCheck crude = crude_estimate_check(sys, A, 0.5);
  CHECK(near(crude.log_lhs, 2.0, 1e-12));
  CHECK(near(crude.log_base, 1.0, 1e-12));
  CHECK(near(crude.exponent, 4.0, 1e-12));  // m(B_1([0, 2))) = 4
  CHECK(crude.ok);

  const CrudeEstimateCheck unit = crude_estimate_check(sys, GroupGrid::lattice_cube(1, 1), 0.5);
  CHECK(near(unit.exponent, 3.0, 1e-12));
  CHECK(unit.ok);
  const CrudeEstimateCheck coarse = crude_estimate_check(sys, A, 0.99);
  CHECK(coarse.log_lhs <= coarse.log_rhs + 1e-9);
}
