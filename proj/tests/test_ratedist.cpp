#include <doctest.h>

#include <cmath>

#include "mdlab/errors.hpp"
#include "mdlab/info.hpp"
#include "mdlab/ratedist.hpp"
#include "oracles.hpp"

using namespace mdlab;
using oracle::near;

TEST_CASE("orbit_codebook") {
  const SystemModel s1 = build_shift(3, 1, 0, 1, 0.5);
  const DistortionMatrix one = orbit_codebook(s1, 1);
  for (std::size_t i = 0; i < s1.size(); ++i)
    for (std::size_t j = 0; j < s1.size(); ++j) CHECK(one(i, j) == s1.base_metric()(i, j));

  const SystemModel s2 = build_shift(2, 1, 0, 2, 0.5);
  const DistortionMatrix two = orbit_codebook(s2, 2);
  for (std::size_t i = 0; i < s2.size(); ++i) CHECK(two(i, i) == 0.0);
  CHECK(near(two(s2.index_of({0, 0}), s2.index_of({0, 1})), 0.5, 1e-15));
}

TEST_CASE("ba_sweep endpoints") {
  const Pmf mu({0.5, 0.3, 0.2});
  const DistortionMatrix rho(3, 3, {0, 1, 2, 1, 0, 1, 2, 1, 0});
  const auto pts = ba_sweep(mu, rho, {0.0, 40.0});
  // zero-rate point: best single reproduction letter
  double best = 1e300;
  for (std::size_t y = 0; y < 3; ++y) {
    double d = 0.0;
    for (std::size_t x = 0; x < 3; ++x) d += mu[x] * rho(x, y);
    best = std::min(best, d);
  }
  CHECK(pts[0].R == 0.0);
  CHECK(near(pts[0].D, best, 1e-15));
  CHECK(near(pts[1].D, 0.0, 1e-6));
  CHECK(near(pts[1].R, entropy(mu), 1e-6));
}

TEST_CASE("binary source with Hamming distortion") {
  const Pmf mu = Pmf::uniform(2);
  const DistortionMatrix rho = DistortionMatrix::hamming(2);
  for (double d : {0.05, 0.1, 0.25}) {
    const RateResult r = rate_at_distortion(mu, rho, d);
    CHECK(near(r.R, 1.0 - oracle::hb(d), 1e-3));
    CHECK(r.D <= d + 1e-12);
  }
  CHECK(near(rate_at_distortion(mu, rho, 0.1).R, 0.531004, 1e-3));
  CHECK(rate_at_distortion(mu, rho, 0.5).R == 0.0);
  CHECK(rate_at_distortion(mu, rho, 2.0).R == 0.0);
  CHECK(near(zero_rate_distortion(mu, rho), 0.5, 1e-15));
}

TEST_CASE("ba_sweep traces a monotone convex curve") {
  const Pmf mu({0.1, 0.2, 0.3, 0.4});
  const DistortionMatrix rho(4, 4, {0, 1, 2, 3, 1, 0, 1, 2, 2, 1, 0, 1, 3, 2, 1, 0});
  const auto pts = ba_sweep(mu, rho, default_betas());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].D <= pts[i - 1].D + 1e-9);
    CHECK(pts[i].R >= pts[i - 1].R - 1e-9);
  }
}

TEST_CASE("rdist_function on an i.i.d. source") {
  const SystemModel sys = build_shift(3, 1, 0, 2, 0.5);
  const MeasureOnPoints mu = product_measure(sys, Pmf({0.5, 0.25, 0.25}));
  const RdistReport rep = rdist_function(sys, mu, 0.2, {1, 2});
  CHECK(near(rep.per_L[0], rep.per_L[1], 2e-2));
  CHECK(rep.value <= rep.per_L[0]);
  CHECK(rdist_function(sys, mu, 0.99, {1, 2}).value == 0.0);
}

TEST_CASE("rdim of a delta measure") {
  const SystemModel sys = build_shift(3, 1, 0, 1, 0.5);
  const MeasureOnPoints mu = product_measure(sys, Pmf::delta(3, 1));
  const RdimEstimate est = rdim_estimate(sys, mu, {0.45, 0.4, 0.35}, {1});
  CHECK(est.upper_slope == 0.0);
  CHECK(est.lower_slope == 0.0);
  CHECK(est.upper_slope >= est.lower_slope);
}

TEST_CASE("KD constant against an independent maximization") {
  CHECK(near(kd_bracket(0.0), 2.0, 1e-12));
  for (double s : {0.1, 0.5, 1.0, 3.0, 7.5}) CHECK(near(kd_bracket(s), oracle::kd_bracket(s), 1e-9));
  for (double s = 2.0; s < 50.0; s += 0.5) CHECK(kd_bracket(s + 0.5) < kd_bracket(s));
  const double s_star = oracle::kd_argmax();
  const KdConstant& kd = kd_constant();
  CHECK(near(kd.argmax_s, s_star, 1e-3));
  CHECK(near(kd.c, oracle::kd_bracket(s_star), 1e-9));
  CHECK(near(kd.K, 1.0 + std::log2(oracle::kd_bracket(s_star)), 1e-9));
  CHECK(near(kd_lower_bound(0.0, 0.1, kd.K), -kd.K, 1e-12));
}

TEST_CASE("duality bound") {
  const Pmf mu({0.5, 0.5});
  const DistortionMatrix rho = DistortionMatrix::hamming(2);
  CHECK(near(duality_bound({1.0, 1.0}, 0.7, 0.2, mu, rho), -0.7 * 0.2, 1e-15));
  CHECK_THROWS_AS(duality_bound({5.0, 5.0}, 0.7, 0.2, mu, rho), Error);
  const auto pts = ba_sweep(mu, rho, {3.0});
  const auto lambda = duality_lambda(mu, rho, pts[0].output, 3.0);
  CHECK(duality_bound(lambda, 3.0, 0.1, mu, rho) <= rate_at_distortion(mu, rho, 0.1).R + 1e-6);
}

TEST_CASE("quantizer_channel and free energy") {
  const auto m = FiniteMetricSpace::from_function(4, oracle::line_dist, 0.0);
  const MeasureOnPoints mu({0.1, 0.2, 0.3, 0.4});
  CHECK(near(quantizer_channel({{0, 1, 2, 3}}, m, mu).I, 0.0, 1e-15));
  const QuantizerChannel singles = quantizer_channel({{0}, {1}, {2}, {3}}, m, mu);
  CHECK(near(singles.I, entropy(mu.as_pmf()), 1e-12));
  CHECK(near(singles.D, 0.0, 1e-15));
  const QuantizerChannel pairs = quantizer_channel({{0, 1}, {1, 2, 3}}, m, mu);
  CHECK(near(pairs.I, oracle::hb(0.3), 1e-12));

  const std::vector<double> p{0.2, 0.5, 0.3}, a{0.0, 1.5, 0.7};
  const double eps = 0.125;
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    lhs += -p[i] * std::log2(p[i]) + p[i] * a[i] * std::log2(1.0 / eps);
    rhs += std::pow(1.0 / eps, a[i]);
  }
  CHECK(near(free_energy_gap(p, a, eps), std::log2(rhs) - lhs, 1e-12));
  CHECK(free_energy_gap(p, a, eps) >= 0.0);
}
