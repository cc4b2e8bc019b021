#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "mdlab/cover.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/harness.hpp"
#include "oracles.hpp"

using namespace mdlab;
using oracle::near;

namespace {

// Every distinct closed ball {y : d(x, y) <= d(x, z)} with padded diameter < eps.
std::set<PointSet> brute_balls(const FiniteMetricSpace& m, double eps) {
  std::set<PointSet> out;
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t z = 0; z < m.size(); ++z) {
      PointSet ball;
      for (std::size_t y = 0; y < m.size(); ++y)
        if (m(x, y) <= m(x, z)) ball.push_back(y);
      if (m.padded_diameter(ball) < eps) out.insert(ball);
    }
  return out;
}

}  // namespace

TEST_CASE("ball_family") {
  const auto line = FiniteMetricSpace::from_function(5, oracle::line_dist, 0.0);
  SUBCASE("small eps gives singletons") {
    const CoverFamily f = ball_family(line, 1.0);
    CHECK(f.size() == 5);
    for (const auto& s : f.sets) CHECK(s.size() == 1);
  }
  SUBCASE("large eps contains the whole set") {
    const CoverFamily f = ball_family(line, 4.5);
    CHECK(std::find(f.sets.begin(), f.sets.end(), PointSet{0, 1, 2, 3, 4}) != f.sets.end());
  }
  SUBCASE("five colinear points at eps 1.2") {
    const CoverFamily f = ball_family(line, 1.2);
    const std::set<PointSet> got(f.sets.begin(), f.sets.end());
    CHECK(got.size() == f.size());
    CHECK(got == brute_balls(line, 1.2));
    // interior balls of radius 1 hold three points, so only the end pairs remain
    CHECK(f.size() == 7);
  }
  SUBCASE("random spaces agree with brute force") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
      std::vector<double> pts(9);
      for (double& p : pts) p = u(rng);
      const auto m = FiniteMetricSpace::from_function(9, [&](std::size_t i, std::size_t j) {
        return std::abs(pts[i] - pts[j]);
      }, 0.01);
      const CoverFamily f = ball_family(m, 0.3);
      CHECK(std::set<PointSet>(f.sets.begin(), f.sets.end()) == brute_balls(m, 0.3));
    }
  }
}

TEST_CASE("min_cover") {
  const auto single = FiniteMetricSpace(1, {0.0}, 0.0);
  CHECK(min_cover(single, ball_family(single, 0.5), 0.5, {}).value == 1.0);

  const auto line = FiniteMetricSpace::from_function(5, oracle::line_dist, 0.0);
  const CoverFamily f = ball_family(line, 1.2);
  const CoverSolution sol = min_cover(line, f, 1.2, {});
  CHECK(sol.value == 3.0);
  CHECK(sol.optimal);
  CHECK(brute_force_cover(5, f.sets, std::vector<double>(f.size(), 1.0)) == 3.0);
  CHECK(is_admissible_cover(line, PointSet{0, 1, 2, 3, 4}, sol.sets, 1.2));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SolverOptions greedy;
  greedy.mode = SolveMode::greedy;
  for (int k = 0; k < 50; ++k) {
    std::vector<std::array<double, 2>> pts(12);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const auto m = FiniteMetricSpace::from_function(12, [&](std::size_t i, std::size_t j) {
      return std::max(std::abs(pts[i][0] - pts[j][0]), std::abs(pts[i][1] - pts[j][1]));
    }, 0.0);
    const CoverFamily fam = ball_family(m, 0.5);
    const double exact = min_cover(m, fam, 0.5, {}).value;
    CHECK(exact <= min_cover(m, fam, 0.5, greedy).value);
    CHECK(exact == brute_force_cover(12, fam.sets, std::vector<double>(fam.size(), 1.0)));
  }
}

TEST_CASE("covering_number_potential") {
  SUBCASE("zero potential counts sets") {
    const auto line = FiniteMetricSpace::from_function(5, [](std::size_t i, std::size_t j) {
      return 0.1 * oracle::line_dist(i, j);
    }, 0.0);
    CHECK(covering_number_potential(line, PotentialField::zeros(5), 0.12, {}).value == 3.0);
    CHECK(covering_number_potential(line, PotentialField::zeros(5), 0.12, {}).value ==
          min_cover(line, ball_family(line, 0.12), 0.12, {}).value);
  }
  SUBCASE("singleton with phi = 2") {
    const auto one = FiniteMetricSpace(1, {0.0}, 0.0);
    CHECK(covering_number_potential(one, PotentialField{{2.0}}, 0.5, {}).value == doctest::Approx(4.0));
  }
  SUBCASE("two points at distance 1 with phi = (0, 1)") {
    const auto two = FiniteMetricSpace(2, {0, 1, 1, 0}, 0.0);
    // no admissible set holds both points: (1/eps)^0 + (1/eps)^1
    CHECK(covering_number_potential(two, PotentialField{{0.0, 1.0}}, 0.5, {}).value == doctest::Approx(3.0));
  }
  SUBCASE("no admissible cover below the floor") {
    const auto two = FiniteMetricSpace(2, {0, 1, 1, 0}, 0.5);
    CHECK_THROWS_AS(covering_number_potential(two, PotentialField::zeros(2), 0.4, {}), Error);
  }
}

TEST_CASE("solve_set_cover matches subset dynamic programming") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = 10;
    std::vector<PointSet> sets;
    std::vector<double> w;
    for (std::size_t i = 0; i < n; ++i) {
      sets.push_back({i});
      w.push_back(1.0 + static_cast<double>(rng() % 5));
    }
    for (int s = 0; s < 15; ++s) {
      PointSet e;
      for (std::size_t i = 0; i < n; ++i)
        if (rng() % 3 == 0) e.push_back(i);
      if (e.empty()) continue;
      sets.push_back(e);
      w.push_back(1.0 + static_cast<double>(rng() % 7));
    }
    // independent oracle: DP over covered masks
    std::vector<double> best(1u << n, 1e300);
    best[0] = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (best[mask] >= 1e300) continue;
      for (std::size_t s = 0; s < sets.size(); ++s) {
        unsigned m2 = mask;
        for (std::size_t x : sets[s]) m2 |= 1u << x;
        best[m2] = std::min(best[m2], best[mask] + w[s]);
      }
    }
    const auto r = solve_set_cover(n, sets, w, {});
    CHECK(r.optimal);
    CHECK(near(r.value, best[(1u << n) - 1], 1e-9));
  }
}

TEST_CASE("covering_table on the q = 4 shift") {
  const SystemModel sys = build_shift(4, 1, 0, 3, 0.5);
  const auto rows = covering_table(sys, {1, 2, 3}, {0.25}, OrbitMetricKind::sup, {});
  REQUIRE(rows.size() == 3);
  for (const CoverRow& r : rows) {
    // distinct L-blocks sit at distance >= 1/3 >= eps, so # = 4^L
    CHECK(near(r.log_value, 2.0 * r.L, 1e-12));
    CHECK(near(r.normalized, 1.0, 1e-12));
    CHECK(r.optimal);
  }
  const auto unresolved = covering_table(sys, {1}, {0.1}, OrbitMetricKind::sup, {});
  CHECK_FALSE(unresolved.front().resolved);
}
