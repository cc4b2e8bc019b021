#include <doctest.h>

#include <cmath>

#include "mdlab/errors.hpp"
#include "mdlab/info.hpp"
#include "oracles.hpp"

using namespace mdlab;
using oracle::near;

TEST_CASE("entropy") {
  CHECK(near(entropy(Pmf::uniform(4)), 2.0, 1e-15));
  CHECK(entropy(Pmf::delta(3, 1)) == 0.0);
  const double expected = -0.75 * std::log2(0.75) - 0.25 * std::log2(0.25);
  CHECK(near(entropy(Pmf({0.75, 0.25})), expected, 1e-12));
  CHECK(near(entropy(Pmf({0.75, 0.25})), 0.811278, 1e-6));
  CHECK_THROWS_AS(Pmf({0.5, 0.6}), Error);
}

TEST_CASE("mutual information") {
  CHECK(near(mutual_information(JointPmf::product(Pmf({0.3, 0.7}), Pmf({0.2, 0.8}))), 0.0, 1e-15));
  CHECK(near(mutual_information(JointPmf(2, 2, {0.5, 0, 0, 0.5})), 1.0, 1e-15));
  const double bsc = mutual_information(Pmf::uniform(2), Channel::binary_symmetric(0.25));
  CHECK(near(bsc, 1.0 - oracle::hb(0.25), 1e-12));
  CHECK(near(bsc, 0.188722, 1e-6));
}

TEST_CASE("conditional entropy identity") {
  const JointPmf j(2, 3, {0.1, 0.2, 0.15, 0.3, 0.05, 0.2});
  // I(X;Y) = H(Y) - H(Y|X)
  CHECK(near(mutual_information(j), entropy(j.marginal_y()) - conditional_entropy(j), 1e-12));
  // H(Y|X) by hand from the rows
  double h = 0.0;
  for (std::size_t x = 0; x < 2; ++x) {
    double row = 0.0;
    for (std::size_t y = 0; y < 3; ++y) row += j(x, y);
    for (std::size_t y = 0; y < 3; ++y) h -= j(x, y) * std::log2(j(x, y) / row);
  }
  CHECK(near(conditional_entropy(j), h, 1e-12));
}

TEST_CASE("log-sum gap") {
  const std::vector<double> a{1, 2, 3}, b{2, 2, 2};
  double direct = 0.0;
  for (int i = 0; i < 3; ++i) direct += a[i] * std::log2(a[i] / b[i]);
  direct -= 6.0 * std::log2(6.0 / 6.0);
  CHECK(near(log_sum_gap(a, b), direct, 1e-12));
  CHECK(log_sum_gap(a, a) == doctest::Approx(0.0));
}

TEST_CASE("coupling_sequence") {
  const JointPmf same = coupling_sequence(Pmf({0.2, 0.8}), Pmf({0.2, 0.8}));
  CHECK(same(0, 1) == 0.0);
  CHECK(same(1, 0) == 0.0);
  const JointPmf pi = coupling_sequence(Pmf({0.6, 0.4}), Pmf({0.5, 0.5}));
  CHECK(near(pi(0, 0), 0.5, 1e-15));
  CHECK(near(pi(0, 1), 0.1, 1e-15));
  CHECK(near(pi(1, 0), 0.0, 1e-15));
  CHECK(near(pi(1, 1), 0.4, 1e-15));
  CHECK(near(total_variation(Pmf({0.6, 0.4}), Pmf({0.5, 0.5})), 0.1, 1e-15));
}

TEST_CASE("quantize_channel merges cells") {
  const JointPmf j(2, 2, {0.25, 0.25, 0.25, 0.25});
  const std::vector<std::size_t> f{0, 0}, g{0, 1};
  const JointPmf q = quantize_channel(j, f, 1, g, 2);
  CHECK(q.rows() == 1);
  CHECK(near(q(0, 0), 0.5, 1e-15));
  CHECK(near(mutual_information(q), 0.0, 1e-15));
}
