#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mdlab/cover.hpp"
#include "mdlab/metric.hpp"

namespace mdlab {

// One property checked over a batch of instances.
struct Check {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // worst signed margin (negative means violated)
  std::string detail;

  Check() = default;
  explicit Check(std::string n) : name(std::move(n)) {}

  bool passed() const { return failures == 0 && instances > 0; }
  // Records one instance; margin >= -tol passes.
  void record(double margin, double tol = 0.0);
  void record(bool ok);
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const;
  const Check* find(const std::string& name) const;
};

std::vector<std::string> suite_names();
// Throws ConfigInvalid for unknown names.
SuiteReport run_suite(const std::string& name, std::uint64_t seed, const SolverOptions& opt = {});

SuiteReport info_suite(std::uint64_t seed, std::size_t instances = 200);
SuiteReport ba_suite(std::uint64_t seed);
SuiteReport bounds_suite(std::uint64_t seed, std::size_t instances = 20);
SuiteReport cover_suite(std::uint64_t seed, const SolverOptions& opt = {});
SuiteReport frostman_suite(std::uint64_t seed, const SolverOptions& opt = {});
SuiteReport chain_suite(const SolverOptions& opt = {});
SuiteReport variational_suite(std::uint64_t seed, const SolverOptions& opt = {});
SuiteReport ratedist_suite(std::uint64_t seed);
SuiteReport tiling_suite(std::uint64_t seed, const SolverOptions& opt = {});
SuiteReport local_suite(const SolverOptions& opt = {});

// Middle-third Cantor net of 2^level points with rho0 = 3^-level.
FiniteMetricSpace cantor_net(int level);

// Largest s with mu(E) <= diam^(E)^s for every E with diam^(E) < delta
// (all subsets when n <= 16, else balls); +inf if nothing is constrained.
double power_law_exponent(const FiniteMetricSpace& m, const std::vector<double>& mu, double delta);

// Minimum weighted cover of 0..n-1 by subset dynamic programming (n <= 20).
double brute_force_cover(std::size_t n, const std::vector<PointSet>& sets, const std::vector<double>& weights);

}  // namespace mdlab
