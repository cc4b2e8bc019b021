#include <doctest.h>

#include <cmath>

#include "mdlab/cover.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/hausdorff.hpp"
#include "oracles.hpp"

using namespace mdlab;
using oracle::near;

namespace {

FiniteMetricSpace cantor(int level) {
  const auto pts = oracle::cantor_points(level);
  return FiniteMetricSpace::from_function(pts.size(), [&](std::size_t i, std::size_t j) {
    return std::abs(pts[i] - pts[j]);
  }, std::pow(3.0, -level));
}

}  // namespace

TEST_CASE("hausdorff_value") {
  SUBCASE("single point with a floor") {
    const FiniteMetricSpace one(1, {0.0}, 0.1);
    for (double s : {0.3, 1.0, 2.5})
      CHECK(near(hausdorff_value(one, PotentialField::zeros(1), 0.5, s, {}), std::pow(0.1, s), 1e-12));
  }
  SUBCASE("nonincreasing in s") {
    const auto m = cantor(3);
    double prev = 1e300;
    for (double s = 0.25; s <= 2.0; s += 0.25) {
      const double v = hausdorff_value(m, PotentialField::zeros(m.size()), 0.3, s, {});
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
  SUBCASE("Cantor level 4 at the similarity dimension") {
    const auto m = cantor(4);
    const double s = std::log(2.0) / std::log(3.0);
    const double v = hausdorff_value(m, PotentialField::zeros(m.size()), 1.0 / 3.0, s, {});
    CHECK(v >= 0.9);
    CHECK(v <= 1.1);
  }
}

TEST_CASE("dimh_at_scale") {
  SUBCASE("zero floor and zero potential") {
    const auto m = FiniteMetricSpace::from_function(4, oracle::line_dist, 0.0);
    CHECK(dimh_at_scale(m, PotentialField::zeros(4), 0.5, {}).value == doctest::Approx(0.0).epsilon(1e-3));
  }
  SUBCASE("Cantor level 4") {
    const auto m = cantor(4);
    const DimhResult r = dimh_at_scale(m, PotentialField::zeros(m.size()), 1.0 / 3.0, {});
    CHECK(std::abs(r.value - std::log(2.0) / std::log(3.0)) <= 0.05);
  }
  SUBCASE("bounded by the covering exponent") {
    for (int level : {2, 3, 4}) {
      const auto m = cantor(level);
      for (double eps : {0.5, 1.0 / 3.0, 0.2}) {
        const auto phi = PotentialField::zeros(m.size());
        const double cover = covering_number_potential(m, phi, eps, {}).value;
        const double dimh = dimh_at_scale(m, phi, eps, {}).value;
        CHECK(dimh <= std::log2(cover) / std::log2(1.0 / eps) + kDimhTol);
      }
    }
  }
}

TEST_CASE("frostman_measure") {
  SUBCASE("t = 0 admits the uniform measure") {
    const auto m = FiniteMetricSpace::from_function(4, oracle::line_dist, 0.1);
    const FrostmanResult r = frostman_measure(m, 3.0, 0.0);
    double total = 0.0;
    for (double w : r.nu.weights) total += w;
    CHECK(near(total, 1.0, 1e-12));
    CHECK(frostman_violation(m, r.nu, 3.0, 0.0) <= 1e-12);
  }
  SUBCASE("two points at t = 1 are infeasible") {
    // only singletons are constrained: nu({x}) <= 0.1, so the optimum is 0.2 < 1
    const FiniteMetricSpace two(2, {0, 1, 1, 0}, 0.1);
    CHECK_THROWS_AS(frostman_measure(two, 0.9, 1.0), Error);
    try {
      frostman_measure(two, 0.9, 1.0);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::infeasible);
    }
  }
  SUBCASE("Cantor level 4 below its dimension") {
    const auto m = cantor(4);
    const double dim = dimh_at_scale(m, PotentialField::zeros(m.size()), 1.0 / 3.0, {}).value;
    const double t = 0.9 * dim, delta = 1.0 / 3.0;
    const FrostmanResult r = frostman_measure(m, delta, t);
    double top = 0.0;
    for (double w : r.nu.weights) top = std::max(top, w);
    CHECK(top <= 2.0 / 16.0 + 1e-12);
    // independent check over every subset with padded diameter below delta / 6
    std::size_t constrained = 0;
    for (unsigned mask = 1; mask < (1u << 16); ++mask) {
      PointSet e;
      double mass = 0.0;
      for (std::size_t i = 0; i < 16; ++i)
        if (mask >> i & 1u) {
          e.push_back(i);
          mass += r.nu[i];
        }
      double diam = 0.0;
      for (std::size_t a : e)
        for (std::size_t b : e) diam = std::max(diam, m(a, b));
      diam += m.rho0();
      if (diam >= delta / 6.0) continue;
      ++constrained;
      CHECK(mass <= std::pow(diam, t) + 1e-9);
    }
    CHECK(constrained > 0);
  }
}
