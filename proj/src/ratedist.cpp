#include "mdlab/ratedist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "mdlab/errors.hpp"
#include "mdlab/orbit.hpp"

namespace mdlab {

DistortionMatrix::DistortionMatrix(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), rho(std::move(values)) {
  require(rho.size() == r * c, ErrorCode::invalid_argument, "distortion matrix shape mismatch");
  for (double v : rho)
    require(v >= 0.0 && std::isfinite(v), ErrorCode::invalid_argument, "distortion must be finite and >= 0");
}

DistortionMatrix DistortionMatrix::from_metric(const FiniteMetricSpace& m) {
  return DistortionMatrix(m.size(), m.size(), m.data());
}

DistortionMatrix DistortionMatrix::hamming(std::size_t n) {
  std::vector<double> v(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 0.0;
  return DistortionMatrix(n, n, std::move(v));
}

double DistortionMatrix::max() const {
  double best = 0.0;
  for (double v : rho) best = std::max(best, v);
  return best;
}

DistortionMatrix orbit_codebook(const SystemModel& sys, const GroupGrid& A) {
  return DistortionMatrix::from_metric(orbit_metric_avg(sys, A));
}

DistortionMatrix orbit_codebook(const SystemModel& sys, int L) { return orbit_codebook(sys, cube_grid(sys, L)); }

namespace {

// Source rows with identical distortion rows (and positive mass) merged,
// reproduction columns with identical columns merged; classes in order of
// first occurrence.
struct Collapsed {
  std::vector<double> mu;
  std::size_t k = 0, m = 0;
  std::vector<double> rho;          // k x m
  std::vector<std::size_t> col_rep;  // original column of each class
};

Collapsed collapse(const Pmf& mu, const DistortionMatrix& rho) {
  require(mu.size() == rho.rows, ErrorCode::invalid_argument, "source pmf does not match distortion rows");
  Collapsed c;
  std::map<std::vector<double>, std::size_t> rows;
  std::vector<std::vector<double>> row_values;
  for (std::size_t x = 0; x < rho.rows; ++x) {
    if (mu[x] <= 0.0) continue;
    std::vector<double> r(rho.rho.begin() + static_cast<std::ptrdiff_t>(x * rho.cols),
                          rho.rho.begin() + static_cast<std::ptrdiff_t>((x + 1) * rho.cols));
    auto [it, fresh] = rows.emplace(r, c.mu.size());
    if (fresh) {
      c.mu.push_back(0.0);
      row_values.push_back(std::move(r));
    }
    c.mu[it->second] += mu[x];
  }
  c.k = c.mu.size();
  std::map<std::vector<double>, std::size_t> cols;
  std::vector<std::vector<double>> col_values;
  for (std::size_t y = 0; y < rho.cols; ++y) {
    std::vector<double> col(c.k);
    for (std::size_t a = 0; a < c.k; ++a) col[a] = row_values[a][y];
    auto [it, fresh] = cols.emplace(col, c.col_rep.size());
    if (fresh) {
      c.col_rep.push_back(y);
      col_values.push_back(std::move(col));
    }
  }
  c.m = c.col_rep.size();
  c.rho.assign(c.k * c.m, 0.0);
  for (std::size_t a = 0; a < c.k; ++a)
    for (std::size_t b = 0; b < c.m; ++b) c.rho[a * c.m + b] = col_values[b][a];
  return c;
}

struct BaState {
  std::vector<double> q;   // m
  double D = 0.0, R = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
};

void ba_zero_rate(const Collapsed& c, BaState& st) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < c.m; ++b) {
    double d = 0.0;
    for (std::size_t a = 0; a < c.k; ++a) d += c.mu[a] * c.rho[a * c.m + b];
    if (d < best_d) {
      best_d = d;
      best = b;
    }
  }
  st.q.assign(c.m, 0.0);
  st.q[best] = 1.0;
  st.D = best_d;
  st.R = 0.0;
  st.converged = true;
  st.iterations = 0;
}

void ba_run(const Collapsed& c, double beta, const BaOptions& opt, BaState& st) {
  if (beta == 0.0) {
    ba_zero_rate(c, st);
    return;
  }
  const std::size_t k = c.k, m = c.m;
  if (st.q.size() != m) st.q.assign(m, 1.0 / static_cast<double>(m));
  // Keep full support so warm starts cannot lose reproduction letters.
  for (double& v : st.q) v = (1.0 - 1e-9) * v + 1e-9 / static_cast<double>(m);
  // Row-shifted kernel 2^(-beta (rho - min_b rho)) computed once; every row
  // keeps an entry equal to 1.
  std::vector<double> kern(k * m), shift(k);
  for (std::size_t a = 0; a < k; ++a) {
    const double lo = *std::min_element(c.rho.begin() + static_cast<std::ptrdiff_t>(a * m),
                                        c.rho.begin() + static_cast<std::ptrdiff_t>((a + 1) * m));
    shift[a] = lo;
    for (std::size_t b = 0; b < m; ++b) kern[a * m + b] = std::exp2(-beta * (c.rho[a * m + b] - lo));
  }
  std::vector<double> qn(m), logit(m);
  st.converged = false;
  for (st.iterations = 1; st.iterations <= opt.max_iter; ++st.iterations) {
    std::fill(qn.begin(), qn.end(), 0.0);
    double D = 0.0, log_z = 0.0, Dshift = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      const double* e = &kern[a * m];
      double z = 0.0;
      for (std::size_t b = 0; b < m; ++b) z += st.q[b] * e[b];
      Dshift += c.mu[a] * shift[a];
      if (z > 1e-250) {
        const double wa = c.mu[a] / z;
        log_z += c.mu[a] * std::log2(z);
        for (std::size_t b = 0; b < m; ++b) {
          const double t = st.q[b] * e[b] * wa;
          qn[b] += t;
          D += t * c.rho[a * m + b];
        }
        continue;
      }
      // Underflow: same row in the log domain.
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < m; ++b) {
        logit[b] = st.q[b] > 0.0 ? std::log2(st.q[b]) - beta * (c.rho[a * m + b] - shift[a])
                                 : -std::numeric_limits<double>::infinity();
        top = std::max(top, logit[b]);
      }
      require(std::isfinite(top), ErrorCode::no_convergence, "Blahut-Arimoto output law vanished");
      double zs = 0.0;
      for (std::size_t b = 0; b < m; ++b) zs += std::exp2(logit[b] - top);
      log_z += c.mu[a] * (top + std::log2(zs));
      for (std::size_t b = 0; b < m; ++b) {
        const double t = c.mu[a] * std::exp2(logit[b] - top) / zs;
        qn[b] += t;
        D += t * c.rho[a * m + b];
      }
    }
    // I = sum_b qn_b log(q_b / qn_b) - beta (D - Dshift) - sum_a mu_a log z_a
    double R = -beta * (D - Dshift) - log_z;
    double cmax = 0.0, avg = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      if (st.q[b] <= 0.0 || qn[b] <= 0.0) continue;
      const double cb = qn[b] / st.q[b];
      R -= qn[b] * std::log2(cb);
      cmax = std::max(cmax, cb);
      avg += qn[b] * std::log2(cb);
    }
    // Blahut's stopping rule: with c_b = qn_b / q_b the Lagrangian is within
    // log max c - sum qn log c of its optimum.
    const double gap = std::log2(cmax) - avg;
    st.D = D;
    st.R = std::max(0.0, R);
    if (gap < opt.tol) {
      st.converged = true;
      break;
    }
    if (st.iterations == opt.max_iter) break;
    // Letters this small never return; dropping them avoids denormal arithmetic.
    for (std::size_t b = 0; b < m; ++b) st.q[b] = qn[b] < 1e-200 ? 0.0 : qn[b];
  }
  st.iterations = std::min(st.iterations, opt.max_iter);
}

Channel expand_channel(const Collapsed& c, const Pmf& mu, const DistortionMatrix& rho, double beta,
                       const BaState& st) {
  std::vector<double> nu(rho.rows * rho.cols, 0.0);
  if (beta == 0.0) {
    std::size_t best = 0;
    for (std::size_t b = 0; b < c.m; ++b)
      if (st.q[b] > 0.5) best = c.col_rep[b];
    for (std::size_t x = 0; x < rho.rows; ++x) nu[x * rho.cols + best] = 1.0;
    return Channel(rho.rows, rho.cols, std::move(nu));
  }
  (void)mu;
  std::vector<double> logit(c.m);
  for (std::size_t x = 0; x < rho.rows; ++x) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < c.m; ++b) {
      logit[b] = (st.q[b] > 0.0 ? std::log2(st.q[b]) : -std::numeric_limits<double>::infinity()) -
                 beta * rho(x, c.col_rep[b]);
      top = std::max(top, logit[b]);
    }
    double z = 0.0;
    for (std::size_t b = 0; b < c.m; ++b) z += std::exp2(logit[b] - top);
    double total = 0.0;
    for (std::size_t b = 0; b < c.m; ++b) {
      const double v = std::exp2(logit[b] - top) / z;
      nu[x * rho.cols + c.col_rep[b]] = v;
      total += v;
    }
    for (std::size_t b = 0; b < c.m; ++b) nu[x * rho.cols + c.col_rep[b]] /= total;
  }
  return Channel(rho.rows, rho.cols, std::move(nu));
}

std::vector<double> expand_output(const Collapsed& c, std::size_t cols, const BaState& st) {
  std::vector<double> out(cols, 0.0);
  for (std::size_t b = 0; b < c.m; ++b) out[c.col_rep[b]] = st.q[b];
  return out;
}

}  // namespace

std::vector<double> default_betas() {
  std::vector<double> betas{0.0};
  for (int i = 0; i < 64; ++i) betas.push_back(std::exp2(-6.0 + 20.0 * i / 63.0));
  return betas;
}

double zero_rate_distortion(const Pmf& mu, const DistortionMatrix& rho) {
  const Collapsed c = collapse(mu, rho);
  BaState st;
  ba_zero_rate(c, st);
  return st.D;
}

std::vector<RDPoint> ba_sweep(const Pmf& mu, const DistortionMatrix& rho, const std::vector<double>& betas,
                              const BaOptions& opt) {
  for (std::size_t i = 0; i < betas.size(); ++i) {
    require(betas[i] >= 0.0, ErrorCode::invalid_argument, "betas must be >= 0");
    require(i == 0 || betas[i] >= betas[i - 1], ErrorCode::invalid_argument, "betas must be sorted");
  }
  const Collapsed c = collapse(mu, rho);
  std::vector<RDPoint> out;
  BaState st;
  for (double beta : betas) {
    if (beta == 0.0) {
      BaState zero;
      ba_zero_rate(c, zero);
      RDPoint p{beta, zero.D, zero.R, true, 0, expand_output(c, rho.cols, zero), {}};
      if (opt.keep_channels) p.channel = expand_channel(c, mu, rho, beta, zero);
      out.push_back(std::move(p));
      st = zero;
      continue;
    }
    ba_run(c, beta, opt, st);
    RDPoint p{beta, st.D, st.R, st.converged, st.iterations, expand_output(c, rho.cols, st), {}};
    if (opt.keep_channels) p.channel = expand_channel(c, mu, rho, beta, st);
    out.push_back(std::move(p));
  }
  return out;
}

RateResult rate_at_distortion(const Pmf& mu, const DistortionMatrix& rho, double eps, const BaOptions& opt) {
  require(eps > 0.0, ErrorCode::invalid_argument, "rate_at_distortion needs eps > 0");
  const Collapsed c = collapse(mu, rho);
  RateResult res;
  BaState zero;
  ba_zero_rate(c, zero);
  if (eps >= zero.D) {
    res.R = 0.0;
    res.D = zero.D;
    res.beta = 0.0;
    res.channel = expand_channel(c, mu, rho, 0.0, zero);
    res.output = expand_output(c, rho.cols, zero);
    return res;
  }
  double floor_d = 0.0;
  for (std::size_t a = 0; a < c.k; ++a) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < c.m; ++b) best = std::min(best, c.rho[a * c.m + b]);
    floor_d += c.mu[a] * best;
  }
  require(eps > floor_d, ErrorCode::infeasible, "eps is below the smallest achievable distortion");

  BaState hi_state, lo_state = zero;
  double lo = 0.0, hi = 1.0;
  for (;;) {
    BaState st = lo_state.q.size() == c.m && lo > 0.0 ? lo_state : BaState{};
    ba_run(c, hi, opt, st);
    if (st.D <= eps) {
      hi_state = st;
      break;
    }
    lo = hi;
    lo_state = st;
    hi *= 2.0;
    require(hi < std::exp2(60.0), ErrorCode::no_convergence, "could not reach the target distortion");
  }
  // Stop once the distortion is pinned down; R moves by about beta * dD.
  for (int it = 0; it < 60 && hi - lo > 1e-9 * hi && hi_state.D < eps * (1.0 - 1e-7); ++it) {
    const double mid = 0.5 * (lo + hi);
    BaState st = hi_state;
    ba_run(c, mid, opt, st);
    if (st.D <= eps) {
      hi = mid;
      hi_state = st;
    } else {
      lo = mid;
    }
  }
  res.R = hi_state.R;
  res.D = hi_state.D;
  res.beta = hi;
  res.converged = hi_state.converged;
  res.channel = expand_channel(c, mu, rho, hi, hi_state);
  res.output = expand_output(c, rho.cols, hi_state);
  return res;
}

RdistReport rdist_function(const SystemModel& sys, const MeasureOnPoints& mu, double eps,
                           const std::vector<int>& L_list, const BaOptions& opt) {
  require(!L_list.empty(), ErrorCode::invalid_argument, "rdist_function needs a nonempty L list");
  RdistReport rep;
  rep.L_list = L_list;
  rep.value = std::numeric_limits<double>::infinity();
  const Pmf source = mu.as_pmf();
  for (int L : L_list) {
    const DistortionMatrix rho = orbit_codebook(sys, L);
    const double raw = rate_at_distortion(source, rho, eps, opt).R;
    const double norm = raw / std::pow(static_cast<double>(L), sys.rank());
    rep.per_L_raw.push_back(raw);
    rep.per_L.push_back(norm);
    rep.value = std::min(rep.value, norm);
  }
  return rep;
}

RdimEstimate rdim_from_values(const std::vector<double>& eps_grid, const std::vector<double>& R) {
  require(eps_grid.size() >= 3 && eps_grid.size() == R.size(), ErrorCode::invalid_argument,
          "rdim needs at least 3 scales");
  for (std::size_t i = 1; i < eps_grid.size(); ++i)
    require(eps_grid[i] < eps_grid[i - 1], ErrorCode::invalid_argument, "eps grid must be decreasing");
  RdimEstimate est;
  est.eps = eps_grid;
  est.R = R;
  const std::size_t n = eps_grid.size();
  const std::size_t start = n / 2;
  est.upper_slope = -std::numeric_limits<double>::infinity();
  est.lower_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = start; i < n; ++i) {
    const double r = R[i] / std::log2(1.0 / eps_grid[i]);
    est.upper_slope = std::max(est.upper_slope, r);
    est.lower_slope = std::min(est.lower_slope, r);
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log2(1.0 / eps_grid[i]);
    sx += x;
    sy += R[i];
    sxx += x * x;
    sxy += x * R[i];
  }
  const double dn = static_cast<double>(n);
  est.lsq_slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  return est;
}

RdimEstimate rdim_estimate(const SystemModel& sys, const MeasureOnPoints& mu, const std::vector<double>& eps_grid,
                           const std::vector<int>& L_list, const BaOptions& opt) {
  std::vector<double> R;
  for (double eps : eps_grid) R.push_back(rdist_function(sys, mu, eps, L_list, opt).value);
  return rdim_from_values(eps_grid, R);
}

double kd_bracket(double s) {
  require(s >= 0.0, ErrorCode::invalid_argument, "kd bracket needs s >= 0");
  const double log_term = s * std::log(2.0 / std::log(2.0)) - (s > 0.0 ? s * std::log(s) : 0.0) + std::lgamma(s + 1.0);
  return std::exp(std::log1p(std::exp(log_term)) / (s + 1.0));
}

const KdConstant& kd_constant() {
  static const KdConstant cached = [] {
    KdConstant k;
    double best_s = 0.0, best = kd_bracket(0.0);
    for (int i = 1; i <= 50000; ++i) {
      const double s = i * 1e-3;
      const double v = kd_bracket(s);
      if (v > best) {
        best = v;
        best_s = s;
      }
    }
    // Golden-section refinement around the grid maximum.
    double a = std::max(0.0, best_s - 1e-3), b = best_s + 1e-3;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100; ++it) {
      const double c1 = b - g * (b - a), c2 = a + g * (b - a);
      if (kd_bracket(c1) >= kd_bracket(c2))
        b = c2;
      else
        a = c1;
    }
    const double s_ref = 0.5 * (a + b);
    if (kd_bracket(s_ref) > best) {
      best = kd_bracket(s_ref);
      best_s = s_ref;
    }
    k.c = best;
    k.argmax_s = best_s;
    k.K = 1.0 + std::log2(best);
    return k;
  }();
  return cached;
}

double kd_lower_bound(double s, double eps, double K) {
  require(eps > 0.0 && eps < 1.0, ErrorCode::invalid_argument, "kd bound needs 0 < eps < 1");
  return s * std::log2(1.0 / eps) - K * (s + 1.0);
}

double duality_bound(const std::vector<double>& lambda, double a, double eps, const Pmf& mu,
                     const DistortionMatrix& rho) {
  require(lambda.size() == rho.rows && mu.size() == rho.rows, ErrorCode::invalid_argument, "duality: size mismatch");
  require(a >= 0.0, ErrorCode::invalid_argument, "duality: a must be >= 0");
  double bound = -a * eps;
  for (std::size_t x = 0; x < rho.rows; ++x) {
    if (mu[x] <= 0.0) continue;
    require(lambda[x] > 0.0, ErrorCode::feasibility_violated, "lambda must be positive on the support");
    bound += mu[x] * std::log2(lambda[x]);
  }
  for (std::size_t y = 0; y < rho.cols; ++y) {
    double s = 0.0;
    for (std::size_t x = 0; x < rho.rows; ++x) s += mu[x] * lambda[x] * std::exp2(-a * rho(x, y));
    require(s <= 1.0 + 1e-12, ErrorCode::feasibility_violated,
            "sum_x mu lambda 2^{-a rho} = " + std::to_string(s) + " > 1 at y = " + std::to_string(y));
  }
  return bound;
}

std::vector<double> duality_lambda(const Pmf& mu, const DistortionMatrix& rho, const std::vector<double>& output,
                                   double a) {
  require(output.size() == rho.cols, ErrorCode::invalid_argument, "duality: output size mismatch");
  std::vector<double> lambda(rho.rows, 1.0);
  for (std::size_t x = 0; x < rho.rows; ++x) {
    double z = 0.0;
    for (std::size_t y = 0; y < rho.cols; ++y) z += output[y] * std::exp2(-a * rho(x, y));
    lambda[x] = 1.0 / z;
  }
  double worst = 0.0;
  for (std::size_t y = 0; y < rho.cols; ++y) {
    double s = 0.0;
    for (std::size_t x = 0; x < rho.rows; ++x) s += mu[x] * lambda[x] * std::exp2(-a * rho(x, y));
    worst = std::max(worst, s);
  }
  // Slightly over-scale so rounding cannot push a column above 1.
  const double scale = worst * (1.0 + 1e-12);
  for (double& l : lambda) l /= scale;
  return lambda;
}

QuantizerChannel quantizer_channel(const std::vector<PointSet>& cover, const FiniteMetricSpace& m,
                                   const MeasureOnPoints& mu) {
  require(mu.size() == m.size(), ErrorCode::invalid_argument, "quantizer: measure size mismatch");
  require(!cover.empty(), ErrorCode::not_a_cover, "quantizer needs a nonempty cover");
  const std::size_t n = m.size(), k = cover.size();
  std::vector<std::size_t> cell(n, k);
  QuantizerChannel qc;
  for (std::size_t i = 0; i < k; ++i) {
    require(!cover[i].empty(), ErrorCode::not_a_cover, "empty cover set");
    qc.reps.push_back(*std::min_element(cover[i].begin(), cover[i].end()));
    for (std::size_t p : cover[i])
      if (cell[p] == k) cell[p] = i;
  }
  std::vector<double> joint(n * k, 0.0);
  qc.cell_mass.assign(k, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    require(cell[x] < k, ErrorCode::not_a_cover, "point " + std::to_string(x) + " is not covered");
    joint[x * k + cell[x]] = mu[x];
    qc.cell_mass[cell[x]] += mu[x];
    const double d = m(x, qc.reps[cell[x]]);
    qc.D += mu[x] * d;
    if (mu[x] > 0.0) qc.max_distance = std::max(qc.max_distance, d);
  }
  const double total = std::accumulate(joint.begin(), joint.end(), 0.0);
  for (double& v : joint) v /= total;
  qc.joint = JointPmf(n, k, std::move(joint));
  qc.I = entropy(std::span<const double>(qc.cell_mass));
  return qc;
}

double free_energy_gap(const std::vector<double>& p, const std::vector<double>& a, double eps) {
  require(p.size() == a.size() && !p.empty(), ErrorCode::invalid_argument, "free energy: size mismatch");
  require(eps > 0.0 && eps < 1.0, ErrorCode::invalid_argument, "free energy needs 0 < eps < 1");
  const double l = std::log2(1.0 / eps);
  double lhs = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) lhs -= p[i] * std::log2(p[i]);
    lhs += p[i] * a[i] * l;
  }
  // log2 sum 2^{a_i l}, stabilized.
  double top = -std::numeric_limits<double>::infinity();
  for (double v : a) top = std::max(top, v * l);
  double z = 0.0;
  for (double v : a) z += std::exp2(v * l - top);
  return top + std::log2(z) - lhs;
}

VariationalCell variational_cell(const SystemModel& sys, const MeasureOnPoints& mu, int L, double eps,
                                 const SolverOptions& opt, bool with_ba) {
  const FiniteMetricSpace dl = orbit_metric_sup(sys, L);
  const PotentialField phi = potential_integral(sys, L);
  const CoverSolution sol = covering_number_potential(dl, phi, eps, opt);
  const QuantizerChannel qc = quantizer_channel(sol.sets, dl, mu);
  const double vol = std::pow(static_cast<double>(L), sys.rank());
  const double l = std::log2(1.0 / eps);
  VariationalCell cell;
  cell.L = L;
  cell.eps = eps;
  cell.quantizer_I = qc.I;
  cell.lhs = qc.I / (vol * l) + mu.integrate(phi) / vol;
  cell.rhs = std::log2(sol.value) / (vol * l);
  cell.slack = cell.rhs - cell.lhs;
  cell.optimal = sol.optimal;
  if (with_ba) cell.ba_R = rate_at_distortion(mu.as_pmf(), orbit_codebook(sys, L), eps).R;
  return cell;
}

ProductChannelCheck product_channel_check(const SystemModel& sys, const MeasureOnPoints& mu, const GroupGrid& A,
                                          const GroupGrid& B, double eps, const BaOptions& opt) {
  const GroupGrid AB = A.united(B);
  const double mA = A.measure(), mB = B.measure(), mAB = AB.measure();
  require(std::abs(mA + mB - mAB) < 1e-9, ErrorCode::invalid_argument, "product channel needs disjoint A and B");
  const Pmf source = mu.as_pmf();
  const DistortionMatrix rA = orbit_codebook(sys, A), rB = orbit_codebook(sys, B);
  const RateResult ra = rate_at_distortion(source, rA, eps, opt);
  const RateResult rb = rate_at_distortion(source, rB, eps, opt);
  ProductChannelCheck out;
  out.I_A = ra.R;
  out.I_B = rb.R;
  out.D_A = ra.D;
  out.D_B = rb.D;

  // Joint of X and the pair (Y_A, Y_B) drawn independently given X.
  const std::size_t n = sys.size();
  std::map<std::pair<std::size_t, std::size_t>, double> out_mass;
  std::vector<std::vector<std::pair<std::size_t, double>>> sa(n), sb(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (ra.channel(x, y) > 0.0) sa[x].emplace_back(y, ra.channel(x, y));
      if (rb.channel(x, y) > 0.0) sb[x].emplace_back(y, rb.channel(x, y));
    }
  double D = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (source[x] <= 0.0) continue;
    for (auto [ya, va] : sa[x])
      for (auto [yb, vb] : sb[x]) {
        const double w = source[x] * va * vb;
        out_mass[{ya, yb}] += w;
        D += w * (mA * rA(x, ya) + mB * rB(x, yb)) / mAB;
      }
  }
  double I = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (source[x] <= 0.0) continue;
    for (auto [ya, va] : sa[x])
      for (auto [yb, vb] : sb[x]) {
        const double v = va * vb;
        if (v > 0.0) I += source[x] * v * std::log2(v / out_mass[{ya, yb}]);
      }
  }
  out.I_AB = std::max(0.0, I);
  out.D_AB = D;
  out.R_AB = rate_at_distortion(source, orbit_codebook(sys, AB), eps, opt).R;
  out.feasible = out.D_AB <= eps + 1e-12;
  out.subadditive = out.I_AB <= out.I_A + out.I_B + 1e-9;
  return out;
}

}  // namespace mdlab
