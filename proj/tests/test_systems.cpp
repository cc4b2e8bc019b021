#include <doctest.h>

#include <cmath>

#include "mdlab/errors.hpp"
#include "mdlab/orbit.hpp"
#include "mdlab/system.hpp"
#include "oracles.hpp"

using namespace mdlab;
using oracle::near;

TEST_CASE("build_shift counts and distances") {
  const SystemModel s = build_shift(2, 1, 0, 4, 0.5);
  CHECK(s.size() == 16);
  CHECK(s.window_size() == 4);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.base_metric()(i, i) == 0.0);

  // q = 4, r = 1: one level of difference at u = 1 is weighted 1/2 and scaled by 1/(q-1)
  const SystemModel t = build_shift(4, 1, 1, 1, 0.5);
  const std::size_t x = t.index_of({0, 0, 0});
  const std::size_t y = t.index_of({0, 0, 1});
  CHECK(near(t.base_metric()(x, y), 0.5 * (1.0 / 3.0), 1e-15));

  CHECK_THROWS_AS(build_shift(4, 1, 0, 10, 0.5, {}, -1.0, 1000), Error);
  try {
    build_shift(4, 1, 0, 10, 0.5, {}, -1.0, 1000);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::cap_exceeded);
  }
}

TEST_CASE("rotation flow") {
  const double pi = std::acos(-1.0);
  SUBCASE("alpha = 0 is the identity") {
    const SystemModel f = build_rotation_flow(0.0, 36, 0.1);
    for (double t : {0.3, 1.7, 10.0})
      for (std::size_t i = 0; i < f.size(); ++i) CHECK(f.act(GridNode{{t, 0.0}, 1.0}, i) == i);
  }
  SUBCASE("full period returns home") {
    const SystemModel f = build_rotation_flow(1.0, 36, 0.1);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(f.act(GridNode{{2.0 * pi, 0.0}, 1.0}, i) == i);
  }
  SUBCASE("quarter turn on 360 samples") {
    const SystemModel f = build_rotation_flow(1.0, 360, 0.1);
    CHECK(f.act(GridNode{{pi / 2.0, 0.0}, 1.0}, 0) == 90);
    CHECK(f.rho0() <= pi / 360.0 + 1e-15);
  }
}

TEST_CASE("zd_reduction") {
  SUBCASE("constant potential survives") {
    const SystemModel r = zd_reduction(build_rotation_flow(1.0, 90, 0.1, PotentialSpec::parse("const", 2.5)));
    for (double v : r.potential().values) CHECK(near(v, 2.5, 1e-12));
  }
  SUBCASE("sine potential integrates to cos t - cos(t + 1)") {
    const SystemModel flow = build_rotation_flow(1.0, 360, 0.01, PotentialSpec::parse("sin"));
    const SystemModel r = zd_reduction(flow);
    const double two_pi = 2.0 * std::acos(-1.0);
    // left Riemann error <= tau / 2, snapping error <= pi / 360
    for (std::size_t i = 0; i < r.size(); i += 45) {
      const double t0 = two_pi * static_cast<double>(i) / 360.0;
      CHECK(near(r.potential()[i], std::cos(t0) - std::cos(t0 + 1.0), 0.02));
    }
  }
  SUBCASE("reduced metric is below the unit-time sup metric") {
    const SystemModel flow = build_rotation_flow(0.7, 60, 0.1);
    const SystemModel r = zd_reduction(flow);
    const auto sup = orbit_metric_sup(flow, GroupGrid::quadrature_cube(1, 1.0, 0.1));
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < r.size(); ++j) CHECK(r.base_metric()(i, j) <= sup(i, j) + 1e-12);
  }
  SUBCASE("tau must divide 1") {
    CHECK_THROWS_AS(zd_reduction(build_rotation_flow(1.0, 60, 0.3)), Error);
  }
}

TEST_CASE("tame_metric") {
  const auto one = tame_metric(FiniteMetricSpace(1, {0.0}, 0.0));
  CHECK(one.size() == 1);
  const auto two = tame_metric(FiniteMetricSpace(2, {0, 1, 1, 0}, 0.0));
  CHECK(near(two(0, 1), 0.5 * 1.0 + 0.25 * 1.0, 1e-15));

  const auto m = FiniteMetricSpace::from_function(7, [](std::size_t i, std::size_t j) {
    return std::abs(std::sin(double(i)) - std::sin(double(j)));
  }, 0.0);
  const auto t = tame_metric(m);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) CHECK(t(i, j) - m(i, j) <= 1e-12);
}

TEST_CASE("product_measure") {
  const SystemModel s3 = build_shift(2, 1, 0, 3, 0.5);
  for (double w : product_measure(s3, Pmf::uniform(2)).weights) CHECK(near(w, 0.125, 1e-15));

  const auto delta = product_measure(s3, Pmf::delta(2, 0));
  CHECK(delta[s3.index_of({0, 0, 0})] == doctest::Approx(1.0));

  const SystemModel s2 = build_shift(2, 1, 0, 2, 0.5);
  const auto mu = product_measure(s2, Pmf({0.75, 0.25}));
  CHECK(near(mu[s2.index_of({0, 1})], 3.0 / 16.0, 1e-15));
  CHECK(is_invariant(s2, mu));
}
