#include "mdlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "mdlab/errors.hpp"
#include "mdlab/hausdorff.hpp"
#include "mdlab/info.hpp"
#include "mdlab/meandim.hpp"
#include "mdlab/orbit.hpp"
#include "mdlab/ratedist.hpp"
#include "mdlab/system.hpp"
#include "mdlab/tiling.hpp"

namespace mdlab {

void Check::record(double margin, double tol) {
  if (instances == 0 || margin < worst) worst = margin;
  ++instances;
  if (!(margin >= -tol)) ++failures;
}

void Check::record(bool ok) { record(ok ? 0.0 : -1.0); }

bool SuiteReport::passed() const {
  if (checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
}

const Check* SuiteReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

using Rng = std::mt19937_64;
using Clock = std::chrono::steady_clock;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
std::size_t pick(Rng& rng, std::size_t a, std::size_t b) {
  return std::uniform_int_distribution<std::size_t>(a, b)(rng);
}

std::vector<double> dirichlet(Rng& rng, std::size_t n, double alpha = 1.0) {
  std::gamma_distribution<double> g(alpha, 1.0);
  std::vector<double> w(n);
  double s = 0.0;
  for (double& x : w) {
    x = g(rng) + 1e-12;
    s += x;
  }
  for (double& x : w) x /= s;
  return w;
}

Pmf random_pmf(Rng& rng, std::size_t n) { return Pmf::normalized(dirichlet(rng, n)); }

Channel random_channel(Rng& rng, std::size_t rows, std::size_t cols) {
  std::vector<double> nu;
  for (std::size_t x = 0; x < rows; ++x) {
    const auto row = dirichlet(rng, cols);
    nu.insert(nu.end(), row.begin(), row.end());
  }
  return Channel(rows, cols, std::move(nu));
}

Pmf mix(const Pmf& a, const Pmf& b, double lambda) {
  std::vector<double> p(a.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = lambda * a[i] + (1.0 - lambda) * b[i];
  return Pmf::normalized(std::move(p));
}

Channel mix(const Channel& a, const Channel& b, double lambda) {
  std::vector<double> nu(a.data().size());
  for (std::size_t i = 0; i < nu.size(); ++i) nu[i] = lambda * a.data()[i] + (1.0 - lambda) * b.data()[i];
  return Channel(a.rows(), a.cols(), std::move(nu));
}

// Random points of [0, 1]^2 under the max norm.
FiniteMetricSpace random_space(Rng& rng, std::size_t n, double rho0) {
  std::vector<std::array<double, 2>> p(n);
  for (auto& x : p) x = {uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
  return FiniteMetricSpace::from_function(
      n, [&](std::size_t i, std::size_t j) { return std::max(std::abs(p[i][0] - p[j][0]), std::abs(p[i][1] - p[j][1])); },
      rho0);
}

FiniteMetricSpace random_line(Rng& rng, std::size_t n, double rho0) {
  std::vector<double> p(n);
  for (double& x : p) x = uniform(rng, 0.0, 1.0);
  return FiniteMetricSpace::from_function(n, [&](std::size_t i, std::size_t j) { return std::abs(p[i] - p[j]); }, rho0);
}

SuiteReport start(const std::string& name, std::uint64_t seed) {
  SuiteReport r;
  r.suite = name;
  r.seed = seed;
  return r;
}

void finish(SuiteReport& r, Clock::time_point t0) {
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

PointSet all_points(std::size_t n) {
  PointSet p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

}  // namespace

FiniteMetricSpace cantor_net(int level) {
  require(level >= 0 && level <= 12, ErrorCode::invalid_argument, "Cantor level must be in [0, 12]");
  const std::size_t n = std::size_t{1} << level;
  std::vector<double> x(n, 0.0);
  for (std::size_t m = 0; m < n; ++m)
    for (int i = 0; i < level; ++i)
      if ((m >> (level - 1 - i)) & 1U) x[m] += 2.0 * std::pow(3.0, -(i + 1));
  return FiniteMetricSpace::from_function(n, [&](std::size_t i, std::size_t j) { return std::abs(x[i] - x[j]); },
                                          std::pow(3.0, -level));
}

double power_law_exponent(const FiniteMetricSpace& m, const std::vector<double>& mu, double delta) {
  require(mu.size() == m.size(), ErrorCode::invalid_argument, "measure size mismatch");
  const std::size_t n = m.size();
  double s = std::numeric_limits<double>::infinity();
  auto consider = [&](double mass, double dhat) {
    if (dhat >= delta || mass <= 0.0) return;
    if (dhat >= 1.0) {
      if (mass > 1.0) s = 0.0;
      return;
    }
    s = std::min(s, std::log2(mass) / std::log2(dhat));
  };
  if (n <= 16) {
    const std::size_t full = std::size_t{1} << n;
    std::vector<double> diam(full, 0.0), mass(full, 0.0);
    for (std::size_t mask = 1; mask < full; ++mask) {
      const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
      const std::size_t rest = mask & (mask - 1);
      double d = diam[rest];
      for (std::size_t j = 0; j < n; ++j)
        if ((rest >> j) & 1U) d = std::max(d, m(low, j));
      diam[mask] = d;
      mass[mask] = mass[rest] + mu[low];
      consider(mass[mask], d + m.rho0());
    }
  } else {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t r = 0; r < n; ++r) {
        PointSet ball;
        double mass = 0.0;
        for (std::size_t y = 0; y < n; ++y)
          if (m(x, y) <= m(x, r)) {
            ball.push_back(y);
            mass += mu[y];
          }
        consider(mass, m.padded_diameter(ball));
      }
  }
  return std::max(0.0, s);
}

double brute_force_cover(std::size_t n, const std::vector<PointSet>& sets, const std::vector<double>& weights) {
  require(n <= 20, ErrorCode::invalid_argument, "brute force cover needs n <= 20");
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<std::size_t> masks;
  for (const auto& s : sets) {
    std::size_t mk = 0;
    for (std::size_t p : s) mk |= std::size_t{1} << p;
    masks.push_back(mk);
  }
  // best[mask] = cheapest way to cover `mask` (the covered set so far).
  std::vector<double> best(full + 1, std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (!std::isfinite(best[mask])) continue;
    const std::size_t first = static_cast<std::size_t>(__builtin_ctzll(~mask));
    for (std::size_t k = 0; k < masks.size(); ++k)
      if ((masks[k] >> first) & 1U) {
        const std::size_t next = mask | masks[k];
        best[next] = std::min(best[next], best[mask] + weights[k]);
      }
  }
  return best[full];
}

SuiteReport info_suite(std::uint64_t seed, std::size_t instances) {
  const auto t0 = Clock::now();
  SuiteReport r = start("info", seed);
  Rng rng(seed);
  Check dpi{"dpi"}, concave_h{"entropy_concavity"}, concave_i{"mi_concave_in_mu"}, convex_i{"mi_convex_in_nu"},
      subadd{"conditional_subadditivity"}, logsum{"log_sum_gap"}, ident{"mi_identity"};
  constexpr double tol = 1e-9;
  for (std::size_t k = 0; k < instances; ++k) {
    const std::size_t nx = pick(rng, 2, 6), ny = pick(rng, 2, 6), nz = pick(rng, 2, 6);
    const Pmf mu = random_pmf(rng, nx);
    const Channel nu = random_channel(rng, nx, ny);
    const Channel g = random_channel(rng, ny, nz);
    // X -> Y -> Z.
    const JointPmf xy = nu.joint(mu);
    std::vector<double> xz(nx * nz, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t z = 0; z < nz; ++z) xz[x * nz + z] += xy(x, y) * g(y, z);
    dpi.record(mutual_information(xy) - mutual_information(JointPmf(nx, nz, xz)), tol);

    const double lambda = uniform(rng, 0.0, 1.0);
    const Pmf p = random_pmf(rng, nx), q = random_pmf(rng, nx);
    concave_h.record(entropy(mix(p, q, lambda)) - lambda * entropy(p) - (1.0 - lambda) * entropy(q), tol);

    const Pmf mu2 = random_pmf(rng, nx);
    concave_i.record(mutual_information(mix(mu, mu2, lambda), nu) - lambda * mutual_information(mu, nu) -
                         (1.0 - lambda) * mutual_information(mu2, nu),
                     tol);
    const Channel nu2 = random_channel(rng, nx, ny);
    convex_i.record(lambda * mutual_information(mu, nu) + (1.0 - lambda) * mutual_information(mu, nu2) -
                        mutual_information(mu, mix(nu, nu2, lambda)),
                    tol);

    // Y1, Y2 conditionally independent given X: I(X; Y1 Y2) <= I(X; Y1) + I(X; Y2).
    std::vector<double> joint12(nx * ny * ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t a = 0; a < ny; ++a)
        for (std::size_t b = 0; b < ny; ++b) joint12[x * ny * ny + a * ny + b] = mu[x] * nu(x, a) * nu2(x, b);
    subadd.record(mutual_information(mu, nu) + mutual_information(mu, nu2) -
                      mutual_information(JointPmf(nx, ny * ny, joint12)),
                  tol);

    std::vector<double> a(nx), b(nx);
    for (std::size_t i = 0; i < nx; ++i) {
      a[i] = uniform(rng, 0.0, 3.0);
      b[i] = uniform(rng, 0.01, 3.0);
    }
    logsum.record(log_sum_gap(a, b), tol);

    const double hy = entropy(xy.marginal_y());
    ident.record(-std::abs(mutual_information(xy) - (hy - conditional_entropy(xy))), tol);
  }
  r.checks = {dpi, concave_h, concave_i, convex_i, subadd, logsum, ident};
  finish(r, t0);
  return r;
}

SuiteReport ba_suite(std::uint64_t seed) {
  const auto t0 = Clock::now();
  SuiteReport r = start("ba", seed);
  Rng rng(seed);
  const Pmf coin = Pmf::uniform(2);
  const DistortionMatrix ham = DistortionMatrix::hamming(2);
  Check shannon{"binary_hamming_1_minus_hb"};
  for (double D : {0.05, 0.1, 0.25}) {
    const RateResult res = rate_at_distortion(coin, ham, D);
    shannon.record(1e-3 - std::abs(res.R - (1.0 - binary_entropy(D))));
  }
  Check endpoints{"endpoints"};
  Check envelope{"envelope_monotone_convex"};
  auto check_sweep = [&](const Pmf& mu, const DistortionMatrix& rho) {
    const auto pts = ba_sweep(mu, rho, default_betas());
    endpoints.record(1e-6 - std::abs(pts.front().R));
    endpoints.record(1e-6 - std::abs(pts.front().D - zero_rate_distortion(mu, rho)));
    // (D, R) along increasing beta: D nonincreasing, R nondecreasing, slopes
    // -beta nonincreasing in D order (convexity of the envelope).
    for (std::size_t i = 1; i < pts.size(); ++i) {
      envelope.record(pts[i - 1].D - pts[i].D, 1e-6);
      envelope.record(pts[i].R - pts[i - 1].R, 1e-6);
    }
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
      const auto& a = pts[i - 1];
      const auto& b = pts[i];
      const auto& c = pts[i + 1];
      if (a.D - c.D < 1e-9) continue;
      // b must lie on or below the chord from a to c.
      const double t = (a.D - b.D) / (a.D - c.D);
      const double chord = a.R + t * (c.R - a.R);
      envelope.record(chord - b.R, 1e-6);
    }
  };
  check_sweep(coin, ham);
  {
    const auto pts = ba_sweep(coin, ham, default_betas());
    endpoints.record(1e-6 - std::abs(pts.back().R - 1.0));
    endpoints.record(1e-6 - pts.back().D);
  }
  for (int k = 0; k < 5; ++k) {
    const std::size_t n = pick(rng, 2, 6);
    const Pmf mu = random_pmf(rng, n);
    const FiniteMetricSpace m = random_line(rng, n, 0.0);
    check_sweep(mu, DistortionMatrix::from_metric(m));
  }
  r.checks = {shannon, endpoints, envelope};
  finish(r, t0);
  return r;
}

SuiteReport bounds_suite(std::uint64_t seed, std::size_t instances) {
  const auto t0 = Clock::now();
  SuiteReport r = start("bounds", seed);
  Rng rng(seed);
  const double K = kd_constant().K;
  Check duality{"ba_ge_duality"}, kd{"ba_ge_kd"}, hyp{"kd_hypothesis"};
  auto run = [&](const FiniteMetricSpace& m, const Pmf& mu, double eps) {
    const DistortionMatrix rho = DistortionMatrix::from_metric(m);
    const RateResult res = rate_at_distortion(mu, rho, eps);
    const auto lambda = duality_lambda(mu, rho, res.output, res.beta);
    duality.record(res.R - duality_bound(lambda, res.beta, eps, mu, rho), 1e-9);
    const double delta = 2.0 * eps * std::log2(1.0 / eps);
    hyp.record(delta > m.rho0());
    const double s = power_law_exponent(m, mu.p, delta);
    kd.record(res.R - kd_lower_bound(s, eps, K), 1e-9);
  };
  // Cantor power-law instance first.
  const FiniteMetricSpace cantor = cantor_net(4);
  run(cantor, Pmf::uniform(cantor.size()), 1.0 / 27.0);
  for (std::size_t k = 1; k < instances; ++k) {
    const std::size_t n = pick(rng, 4, 9);
    const FiniteMetricSpace m = random_line(rng, n, 0.01);
    const Pmf mu = random_pmf(rng, n);
    run(m, mu, uniform(rng, 0.02, 0.15));
  }
  r.checks = {duality, kd, hyp};
  finish(r, t0);
  return r;
}

SuiteReport cover_suite(std::uint64_t seed, const SolverOptions& opt) {
  const auto t0 = Clock::now();
  SuiteReport r = start("cover", seed);
  Rng rng(seed);
  Check brute{"exact_equals_brute_force"}, lemma31{"dimh_le_log_cover"}, monotone{"h_nonincreasing_in_s"},
      cantor_dim{"cantor_dimh"}, cantor_h{"cantor_h_at_log2_log3"};
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = pick(rng, 6, 12);
    const FiniteMetricSpace base = random_space(rng, n, 0.02);
    PotentialField phi;
    for (std::size_t i = 0; i < n; ++i) phi.values.push_back(uniform(rng, 0.0, 2.0));
    const PotentialField zero = PotentialField::zeros(n);
    const FiniteMetricSpace tame = tame_metric(base);
    for (double eps : {0.3, 0.5, 0.9}) {
      // Exact solver against subset DP on the same family.
      CoverFamily f = ball_family(base, eps);
      f.attach_potential(phi);
      std::vector<double> w;
      for (double a : f.sup_phi) w.push_back(std::pow(1.0 / eps, a));
      const double exact = covering_number_potential(base, phi, eps, opt).value;
      const double oracle = brute_force_cover(n, f.sets, w);
      brute.record(-std::abs(exact - oracle) / oracle, 1e-9);

      for (const FiniteMetricSpace* m : {&base, &tame})
        for (const PotentialField* p : {&zero, static_cast<const PotentialField*>(&phi)}) {
          if (m->rho0() >= eps) continue;
          const CoverSolution c = covering_number_potential(*m, *p, eps, opt);
          const DimhResult d = dimh_at_scale(*m, *p, eps, opt, {}, {c.sets});
          lemma31.record(std::log2(c.value) / std::log2(1.0 / eps) + kDimhTol - d.value);
          double prev = std::numeric_limits<double>::infinity();
          for (double s = p->max() + 0.25; s < p->max() + 4.0; s += 0.5) {
            const double h = hausdorff_value(*m, *p, eps, s, opt, {}, d.pool);
            monotone.record(prev - h, 1e-12);
            prev = h;
          }
        }
    }
  }
  const FiniteMetricSpace c4 = cantor_net(4);
  const PotentialField z16 = PotentialField::zeros(c4.size());
  const double target = std::log(2.0) / std::log(3.0);
  cantor_dim.record(0.05 - std::abs(dimh_at_scale(c4, z16, 1.0 / 3.0, opt).value - target));
  cantor_h.record(0.1 - std::abs(hausdorff_value(c4, z16, 1.0 / 3.0, target, opt) - 1.0));
  r.checks = {brute, lemma31, monotone, cantor_dim, cantor_h};
  finish(r, t0);
  return r;
}

SuiteReport frostman_suite(std::uint64_t seed, const SolverOptions& opt) {
  const auto t0 = Clock::now();
  SuiteReport r = start("frostman", seed);
  Rng rng(seed);
  Check constraints{"constraints_satisfied"}, cantor{"cantor_feasible"}, infeasible{"two_point_infeasible"},
      downward{"feasible_downward"};
  auto verify = [&](const FiniteMetricSpace& m, const FrostmanResult& fr, double delta) {
    std::size_t checked = 0;
    const double v = frostman_violation(m, fr.nu, delta, fr.t, &checked);
    constraints.record(-v, 1e-9);
  };
  for (int k = 0; k < 10; ++k) {
    const std::size_t n = pick(rng, 5, 14);
    const FiniteMetricSpace m = random_space(rng, n, 0.02);
    const double dim = dimh_at_scale(m, PotentialField::zeros(n), 0.5, opt).value;
    const double delta = 1.0;
    try {
      const FrostmanResult fr = frostman_measure(m, delta, 0.5 * dim);
      verify(m, fr, delta);
      const FrostmanResult lower = frostman_measure(m, delta, 0.25 * dim);
      verify(m, lower, delta);
      downward.record(true);
    } catch (const Error& e) {
      // Feasibility at t must imply feasibility below t, so only an
      // infeasible upper exponent is acceptable here.
      if (e.code() != ErrorCode::infeasible) throw;
      bool lower_ok = true;
      try {
        frostman_measure(m, delta, 0.0);
      } catch (const Error&) {
        lower_ok = false;
      }
      downward.record(lower_ok);
    }
  }
  const FiniteMetricSpace c4 = cantor_net(4);
  const double dim = dimh_at_scale(c4, PotentialField::zeros(c4.size()), 1.0 / 3.0, opt).value;
  try {
    const FrostmanResult fr = frostman_measure(c4, 1.0 / 3.0, 0.9 * dim);
    verify(c4, fr, 1.0 / 3.0);
    double top = 0.0;
    for (double w : fr.nu.weights) top = std::max(top, w);
    cantor.record(2.0 / 16.0 - top, 1e-12);
  } catch (const Error& e) {
    cantor.record(false);
    cantor.detail = e.what();
  }
  // Ball-constrained mode on a larger net.
  const FiniteMetricSpace c5 = cantor_net(5);
  const FrostmanResult fr5 = frostman_measure(c5, 1.0 / 3.0, 0.5);
  verify(c5, fr5, 1.0 / 3.0);

  const FiniteMetricSpace two(2, {0.0, 1.0, 1.0, 0.0}, 0.1);
  try {
    frostman_measure(two, 0.9, 1.0);
    infeasible.record(false);
  } catch (const Error& e) {
    infeasible.record(e.code() == ErrorCode::infeasible);
  }
  r.checks = {constraints, cantor, infeasible, downward};
  finish(r, t0);
  return r;
}

SuiteReport chain_suite(const SolverOptions& opt) {
  const auto t0 = Clock::now();
  SuiteReport r = start("chain", 0);
  const SystemModel sys = build_shift(4, 1, 0, 5, 0.5);
  const std::vector<double> eps{1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32};
  const SweepTable t = mdim_sweep(sys, eps, {1, 2, 3, 4, 5}, opt);
  Check chain{"dimh_L1_le_dimh_sup_le_log_cover"}, nerve{"nerve_widim_bounds"}, band{"finest_log_cover_band"},
      rows{"row_count"};
  chain.record(t.chain_ok);
  nerve.record(t.nerve_ok);
  for (const auto& v : t.violations) chain.detail += v + "; ";
  const auto it = t.summary.find("log_cover");
  if (it != t.summary.end()) {
    const double v = it->second.estimate;
    band.record(std::min(v - 0.8, 1.05 - v));
    band.detail = "estimate " + std::to_string(v);
  } else {
    band.record(false);
  }
  rows.record(t.rows.size() == 5 * 4 * 5);
  r.checks = {chain, nerve, band, rows};
  finish(r, t0);
  return r;
}

SuiteReport variational_suite(std::uint64_t seed, const SolverOptions& opt) {
  const auto t0 = Clock::now();
  SuiteReport r = start("variational", seed);
  Rng rng(seed);
  Check cells{"per_scale_variational"}, energy{"free_energy"};
  for (const PotentialSpec& phi : {PotentialSpec{}, PotentialSpec::parse("coord0"), PotentialSpec::parse("const", 0.5)})
    for (int q : {4, 8}) {
      const SystemModel sys = build_shift(q, 1, 0, q == 4 ? 3 : 2, 0.5, phi);
      std::vector<Pmf> marginals{Pmf::uniform(q)};
      for (int k = 0; k < 2; ++k) marginals.push_back(random_pmf(rng, q));
      for (const Pmf& marg : marginals) {
        const MeasureOnPoints mu = product_measure(sys, marg);
        for (int L = 1; L <= sys.budget(); ++L)
          for (double eps : {1.0 / 4, 1.0 / 8, 1.0 / 16}) {
            if (eps <= sys.rho0()) continue;
            const VariationalCell c = variational_cell(sys, mu, L, eps, opt);
            cells.record(c.slack, 1e-9);
          }
      }
    }
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = pick(rng, 1, 8);
    const auto p = dirichlet(rng, n);
    std::vector<double> a(n);
    for (double& x : a) x = uniform(rng, -2.0, 3.0);
    energy.record(free_energy_gap(p, a, uniform(rng, 0.01, 0.99)), 1e-9);
  }
  r.checks = {cells, energy};
  finish(r, t0);
  return r;
}

SuiteReport ratedist_suite(std::uint64_t seed) {
  const auto t0 = Clock::now();
  SuiteReport r = start("ratedist", seed);
  Rng rng(seed);
  Check product{"product_channel_subadditive"}, invariance{"translation_invariance"}, slope{"rdim_slope_band"};
  for (int q : {2, 3}) {
    const SystemModel sys = build_shift(q, 1, 0, 3, 0.5);
    for (int k = 0; k < 2; ++k) {
      const MeasureOnPoints mu = product_measure(sys, k == 0 ? Pmf::uniform(q) : random_pmf(rng, q));
      for (double eps : {0.2, 0.35}) {
        const GroupGrid A = GroupGrid::lattice_box(1, {0, 0}, {1, 1});
        const GroupGrid B = GroupGrid::lattice_box(1, {1, 0}, {3, 1});
        const ProductChannelCheck pc = product_channel_check(sys, mu, A, B, eps);
        product.record(pc.feasible && pc.subadditive);
        const Pmf src = mu.as_pmf();
        const double base = rate_at_distortion(src, orbit_codebook(sys, A), eps).R;
        for (int a = 1; a <= 2; ++a) {
          const GroupGrid moved = GroupGrid::lattice_box(1, {a, 0}, {a + 1, 1});
          invariance.record(-std::abs(rate_at_distortion(src, orbit_codebook(sys, moved), eps).R - base), 1e-9);
        }
      }
    }
  }
  const SystemModel big = build_shift(65, 1, 0, 1, 0.5);
  const MeasureOnPoints uni = product_measure(big, Pmf::uniform(65));
  const RdimEstimate est = rdim_estimate(big, uni, {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32}, {1});
  slope.record(std::min(est.lsq_slope - 0.7, 1.1 - est.lsq_slope));
  slope.detail = "slope " + std::to_string(est.lsq_slope);
  r.checks = {product, invariance, slope};
  finish(r, t0);
  return r;
}

namespace {

struct TileInstance {
  int d = 1;
  Box A;
  std::vector<std::vector<Cube>> families;
  double eta = 0.5;
};

// Lattice families of integer sides l_1 < l_2 < ... with l_{k+1} >= k0 l_k,
// and A large enough for the boundary hypothesis.
TileInstance make_tile_instance(Rng& rng, int d, std::size_t k0) {
  TileInstance in;
  in.d = d;
  in.eta = uniform(rng, 0.5, 0.9);
  std::vector<int> sides{1};
  for (std::size_t k = 1; k < k0; ++k)
    sides.push_back(static_cast<int>(k0) * sides.back() + static_cast<int>(pick(rng, 0, 1)));
  const double lmax = sides.back();
  const double need = (d == 1 ? 12.0 : 24.0) * lmax / in.eta;
  const double S = need * uniform(rng, 1.1, 1.5) + 2.0 * lmax;
  for (int k = 0; k < d; ++k) {
    in.A.lo[k] = uniform(rng, 0.0, 5.0);
    in.A.hi[k] = in.A.lo[k] + S;
  }
  for (int side : sides) {
    std::vector<Cube> fam;
    const int off0 = static_cast<int>(pick(rng, 0, side - 1));
    const int off1 = static_cast<int>(pick(rng, 0, side - 1));
    auto first = [&](double lo, int off) {
      return off + side * static_cast<int>(std::floor((lo - off) / side));
    };
    const int x0 = first(in.A.lo[0], off0);
    const int y0 = d == 2 ? first(in.A.lo[1], off1) : 0;
    for (int x = x0; x < in.A.hi[0]; x += side) {
      if (d == 1) {
        fam.push_back({{static_cast<double>(x), 0.0}, static_cast<double>(side)});
        continue;
      }
      for (int y = y0; y < in.A.hi[1]; y += side)
        fam.push_back({{static_cast<double>(x), static_cast<double>(y)}, static_cast<double>(side)});
    }
    in.families.push_back(std::move(fam));
  }
  return in;
}

}  // namespace

SuiteReport tiling_suite(std::uint64_t seed, const SolverOptions& opt) {
  const auto t0 = Clock::now();
  SuiteReport r = start("tiling", seed);
  Rng rng(seed);
  Check tiles{"quasi_tile_postconditions"}, hyps{"quasi_tile_hypotheses"}, block{"block_coding"},
      crude{"crude_estimate"}, nbhd{"neighborhood_le_measure_plus_boundary"};
  std::ostringstream k0log;
  for (int k = 0; k < 50; ++k) {
    const int d = k % 2 == 0 ? 1 : 2;
    bool done = false;
    for (std::size_t k0 = 2; k0 <= 3 && !done; ++k0) {
      const TileInstance in = make_tile_instance(rng, d, k0);
      try {
        check_tile_hypotheses(d, in.A, in.families, in.eta, 0.0);
        hyps.record(true);
      } catch (const Error& e) {
        hyps.record(false);
        hyps.detail = e.what();
        continue;
      }
      TileDiagnostics dg;
      std::vector<Cube> sel;
      try {
        sel = quasi_tile(d, in.A, in.families, in.eta, {}, &dg);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::selection_failed) continue;  // try a larger k0
        throw;
      }
      // Independent postcondition checks: containment, disjointness through
      // additivity of measure, and the leftover bound.
      BoxUnion sel_union{d, {}};
      double sum = 0.0;
      bool inside = true;
      for (const auto& c : sel) {
        const Box b = c.box(d);
        inside = inside && contains(in.A, b, d);
        sel_union.boxes.push_back(b);
        sum += std::pow(c.side, d);
      }
      const double covered = sel.empty() ? 0.0 : measure(sel_union);
      const double mA = measure(BoxUnion::single(d, in.A));
      tiles.record(inside && std::abs(covered - sum) <= 1e-9 * mA && dg.leftover_neighborhood < in.eta * mA &&
                   std::abs(dg.leftover_measure - (mA - covered)) <= 1e-9 * mA);
      k0log << k0 << ' ';
      done = true;
    }
    if (!done) tiles.record(false);
  }
  tiles.detail = "k0 per instance: " + k0log.str();

  for (int k = 0; k < 20; ++k) {
    const int d = k % 2 == 0 ? 1 : 2;
    BoxUnion u{d, {}};
    const std::size_t nb = pick(rng, 1, 4);
    for (std::size_t i = 0; i < nb; ++i) {
      Box b;
      for (int a = 0; a < d; ++a) {
        b.lo[a] = uniform(rng, 0.0, 10.0);
        b.hi[a] = b.lo[a] + uniform(rng, 0.1, 4.0);
      }
      u.boxes.push_back(b);
    }
    const double rr = uniform(rng, 0.0, 2.0);
    nbhd.record(measure(u) + boundary_measure(u, rr) - neighborhood_measure(u, rr), 1e-9);
  }

  struct ShiftCase {
    int q, d, r, Lmax;
    PotentialSpec phi;
  };
  const std::vector<ShiftCase> cases{{2, 1, 0, 3, {}},
                                     {2, 1, 1, 2, {}},
                                     {3, 1, 0, 3, PotentialSpec::parse("coord0")},
                                     {2, 2, 0, 2, PotentialSpec::parse("const", 0.5)}};
  for (const auto& c : cases) {
    const SystemModel sys = build_shift(c.q, c.d, c.r, c.Lmax, 0.5, c.phi);
    const PointSet all = all_points(sys.size());
    std::vector<std::pair<GroupGrid, std::vector<GroupGrid>>> layouts;
    if (c.d == 1) {
      auto box = [](int a, int b) { return GroupGrid::lattice_box(1, {a, 0}, {b, 1}); };
      layouts.push_back({box(0, 2), {box(0, 1), box(1, 2)}});
      layouts.push_back({box(0, 2), {box(0, 2)}});
      if (c.Lmax >= 3) {
        layouts.push_back({box(0, 3), {box(0, 2), box(1, 3)}});
        layouts.push_back({box(0, 3), {box(0, 1), box(1, 2), box(2, 3)}});
      }
    } else {
      auto box = [](int a0, int a1, int b0, int b1) { return GroupGrid::lattice_box(2, {a0, b0}, {a1, b1}); };
      layouts.push_back({box(0, 2, 0, 2), {box(0, 1, 0, 2), box(1, 2, 0, 2)}});
      layouts.push_back({box(0, 2, 0, 1), {box(0, 1, 0, 1), box(1, 2, 0, 1)}});
    }
    for (double eps : {0.3, 0.5, 0.9}) {
      if (eps <= sys.rho0()) continue;
      for (const auto& [A, parts] : layouts) {
        PointSet half;
        for (std::size_t i = 0; i < sys.size(); ++i)
          if (std::bernoulli_distribution(0.5)(rng)) half.push_back(i);
        if (half.empty()) half.push_back(0);
        for (const PointSet* E : {&all, static_cast<const PointSet*>(&half)}) {
          const BlockCodingCheck bc = block_coding_check(sys, *E, A, parts, eps, opt);
          block.record(bc.ok);
        }
        const CrudeEstimateCheck ce = crude_estimate_check(sys, A, eps, opt);
        crude.record(ce.log_rhs - ce.log_lhs, 1e-9);
      }
    }
  }
  r.checks = {tiles, hyps, nbhd, block, crude};
  finish(r, t0);
  return r;
}

SuiteReport local_suite(const SolverOptions& opt) {
  const auto t0 = Clock::now();
  SuiteReport r = start("local", 0);
  const SystemModel sys = build_shift(4, 1, 1, 4, 0.5);
  const LocalFormulaReport rep = local_formula_report(sys, 0.4, {1.0 / 4, 1.0 / 8}, {1, 2, 3, 4}, opt);
  Check trivial{"local_le_global"}, ratio{"finest_ratio_ge_0_8"};
  std::ostringstream trend;
  for (const auto& row : rep.rows) {
    if (!row.resolved) continue;
    trivial.record(row.global + 1e-6 - row.local);
    trend << "eps=" << row.eps << " ratio=" << row.ratio << "; ";
  }
  ratio.record(rep.finest_ratio - 0.8);
  ratio.detail = trend.str();
  r.checks = {trivial, ratio};
  finish(r, t0);
  return r;
}

std::vector<std::string> suite_names() {
  return {"info", "ba", "bounds", "cover", "frostman", "chain", "variational", "ratedist", "tiling", "local"};
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, const SolverOptions& opt) {
  if (name == "info") return info_suite(seed);
  if (name == "ba") return ba_suite(seed);
  if (name == "bounds") return bounds_suite(seed);
  if (name == "cover") return cover_suite(seed, opt);
  if (name == "frostman") return frostman_suite(seed, opt);
  if (name == "chain") return chain_suite(opt);
  if (name == "variational") return variational_suite(seed, opt);
  if (name == "ratedist") return ratedist_suite(seed);
  if (name == "tiling") return tiling_suite(seed, opt);
  if (name == "local") return local_suite(opt);
  fail(ErrorCode::config_invalid, "unknown suite '" + name + "'");
}

}  // namespace mdlab
