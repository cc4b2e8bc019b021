#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mdlab/errors.hpp"
#include "mdlab/meandim.hpp"
#include "mdlab/orbit.hpp"
#include "oracles.hpp"

using namespace mdlab;
using oracle::near;

namespace {

FiniteMetricSpace circle8() {
  return FiniteMetricSpace::from_function(8, [](std::size_t i, std::size_t j) {
    const double k = std::abs(double(i) - double(j));
    return std::min(k, 8.0 - k);
  }, 0.0);
}

const std::vector<PointSet> kArcs{{0, 1, 2}, {2, 3, 4}, {4, 5, 6}, {0, 6, 7}};

SystemModel one_point() {
  return SystemModel::point_map(FiniteMetricSpace(1, {0.0}, 0.01), PotentialField::zeros(1), {0});
}

}  // namespace

TEST_CASE("nerve_of_cover") {
  const auto m = circle8();
  SUBCASE("disjoint sets give isolated vertices") {
    const NerveComplex n = nerve_of_cover(m, {{0, 1}, {2, 3}, {4, 5}, {6, 7}}, 2.0);
    CHECK(n.edges().empty());
    CHECK(n.dimension() == 0);
  }
  SUBCASE("four arcs give a 4-cycle") {
    const NerveComplex n = nerve_of_cover(m, kArcs, 2.5);
    const auto edges = n.edges();
    const std::set<std::pair<std::size_t, std::size_t>> got(edges.begin(), edges.end());
    // arcs i and j meet exactly when they share an endpoint
    std::set<std::pair<std::size_t, std::size_t>> expected;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) {
        PointSet both;
        std::set_intersection(kArcs[i].begin(), kArcs[i].end(), kArcs[j].begin(), kArcs[j].end(),
                              std::back_inserter(both));
        if (!both.empty()) expected.insert({i, j});
      }
    CHECK(got == expected);
    CHECK(got.size() == 4);
    CHECK(n.dimension() == 1);
  }
  SUBCASE("one set covering everything") {
    const NerveComplex n = nerve_of_cover(m, {{0, 1, 2, 3, 4, 5, 6, 7}}, 5.0);
    CHECK(n.vertices == 1);
    CHECK(n.dimension() == 0);
  }
  SUBCASE("not a cover") {
    CHECK_THROWS_AS(nerve_of_cover(m, {{0, 1, 2}}, 2.5), Error);
    CHECK_THROWS_AS(nerve_of_cover(m, kArcs, 2.0), Error);  // arcs have diameter 2
  }
}

TEST_CASE("widim_upper") {
  const FiniteMetricSpace one(1, {0.0}, 0.0);
  const WidimBound w0 = widim_upper(one, PotentialField::zeros(1), 0.5, {{0}});
  CHECK(w0.widim == 0.0);
  CHECK(w0.widim_prime == 0.0);

  const auto m = circle8();
  const WidimBound w1 = widim_upper(m, PotentialField::zeros(8), 2.5, kArcs);
  CHECK(w1.widim == 1.0);
  CHECK(w1.widim_prime == 1.0);

  PotentialField phi = PotentialField::zeros(8);
  phi.values[2] = 1.0;  // an overlap point
  const WidimBound w2 = widim_upper(m, phi, 2.5, kArcs);
  CHECK(w2.widim == 2.0);
  CHECK(w2.widim_prime == 2.0);
}

TEST_CASE("mdim_sweep") {
  SUBCASE("trivial action") {
    const SweepTable t = mdim_sweep(one_point(), {0.5}, {1, 2}, {});
    CHECK(t.rows.size() == 10);
    for (const SweepRow& r : t.rows) CHECK(r.value == doctest::Approx(0.0).epsilon(1e-3));
  }
  SUBCASE("q = 4 shift at eps = 1/4") {
    const SystemModel sys = build_shift(4, 1, 0, 3, 0.5);
    const SweepTable t = mdim_sweep(sys, {0.25, 0.0625}, {1, 2, 3}, {});
    CHECK(t.rows.size() == 3 * 2 * 5);
    CHECK(t.chain_ok);
    CHECK(t.nerve_ok);
    for (const SweepRow& r : t.rows) {
      if (r.quantity == Quantity::log_cover && r.eps == 0.25) CHECK(near(r.normalized, 1.0, 1e-12));
      if (r.eps == 0.0625) CHECK_FALSE(r.resolved);
    }
    for (int L : {1, 2, 3}) {
      double sup = 0.0, l1 = 0.0;
      for (const SweepRow& r : t.rows) {
        if (r.L != L || r.eps != 0.25) continue;
        if (r.quantity == Quantity::dimh_sup) sup = r.value;
        if (r.quantity == Quantity::dimh_L1) l1 = r.value;
      }
      CHECK(l1 <= sup + 1e-12);
    }
  }
}

TEST_CASE("finest_cell") {
  const SystemModel sys = build_shift(4, 1, 0, 3, 0.5);  // rho0 = 1/8
  const auto c = finest_cell(sys, {1, 2, 3}, {0.25, 0.125, 0.0625});
  REQUIRE(c.has_value());
  CHECK(c->first == 3);
  CHECK(c->second == 0.25);
}

TEST_CASE("delta_fiber") {
  const SystemModel sys = build_shift(2, 1, 0, 3, 0.5);
  const auto A = GroupGrid::lattice_cube(1, 3);
  CHECK(delta_fiber(sys, 5, 10.0, A).size() == sys.size());
  CHECK(delta_fiber(sys, 5, 0.5, A) == PointSet{5});
  // oracle: threshold the weighted coordinate differences over all budgeted shifts
  const SystemModel wide = build_shift(2, 1, 1, 2, 0.5);
  const auto B = GroupGrid::lattice_cube(1, 2);
  for (std::size_t x = 0; x < wide.size(); x += 3) {
    PointSet expected;
    for (std::size_t y = 0; y < wide.size(); ++y) {
      double worst = 0.0;
      for (int u = 0; u < 2; ++u)
        for (int v = -1; v <= 1; ++v) {
          const int w = u + v;
          const double diff = std::abs(wide.symbol(x, {w, 0}) - wide.symbol(y, {w, 0}));
          worst = std::max(worst, std::pow(0.5, std::abs(v)) * diff);
        }
      if (worst <= 0.4) expected.push_back(y);
    }
    CHECK(delta_fiber(wide, x, 0.4, B) == expected);
  }
}

TEST_CASE("p_t") {
  const SystemModel sys = build_shift(2, 1, 0, 2, 0.5);
  CHECK(p_t(sys, PointSet{3}, 0.5, {1, 2}, {}).value == 0.0);
  // all points: log2 # / L at the best L; blocks are 1 apart so # = 2^L
  const PtValue all = p_t(sys, PointSet{0, 1, 2, 3}, 0.5, {1, 2}, {});
  CHECK(near(all.value, 1.0, 1e-12));
}

TEST_CASE("local_formula_report") {
  const SystemModel sys = build_shift(2, 1, 0, 3, 0.5);
  const LocalFormulaReport big = local_formula_report(sys, 10.0, {0.5}, {1, 2, 3}, {});
  REQUIRE(big.rows.size() == 1);
  CHECK(near(big.rows[0].local, big.rows[0].global, 1e-12));
  const LocalFormulaReport one = local_formula_report(one_point(), 0.4, {0.5}, {1}, {});
  CHECK(one.rows[0].local == 0.0);
  CHECK(one.rows[0].global == 0.0);
  CHECK(one.ok);
}

TEST_CASE("variational_report integral of coord0") {
  const SystemModel sys = build_shift(4, 1, 0, 2, 0.5, PotentialSpec::parse("coord0"));
  const MeasureOnPoints mu = product_measure(sys, Pmf::uniform(4));
  const VariationalReport rep = variational_report(sys, {mu}, {0.25}, {1, 2}, {});
  REQUIRE(rep.integrals.size() == 1);
  // mean of the levels 0, 1/3, 2/3, 1
  CHECK(near(rep.integrals[0], 0.5, 1e-12));
  CHECK(rep.ok);
}

TEST_CASE("widim_hausdorff_hypothesis") {
  const FiniteMetricSpace one(1, {0.0}, 1e-6);
  CHECK(widim_hausdorff_hypothesis(one, PotentialField::zeros(1), 0.5, 1, 1.0, {}));
  const auto big = FiniteMetricSpace::from_function(20, oracle::line_dist, 0.5);
  CHECK_FALSE(widim_hausdorff_hypothesis(big, PotentialField::constant(20, 3.0), 4.0, 1, 1.0, {}));
}
