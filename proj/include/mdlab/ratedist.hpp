#pragma once

#include <cstddef>
#include <vector>

#include "mdlab/cover.hpp"
#include "mdlab/info.hpp"
#include "mdlab/metric.hpp"
#include "mdlab/system.hpp"

namespace mdlab {

// rho(x, y) for sources x and reproductions y, row-major.
struct DistortionMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> rho;

  DistortionMatrix() = default;
  DistortionMatrix(std::size_t r, std::size_t c, std::vector<double> values);
  static DistortionMatrix from_metric(const FiniteMetricSpace& m);
  static DistortionMatrix hamming(std::size_t n);

  double operator()(std::size_t x, std::size_t y) const { return rho[x * cols + y]; }
  double max() const;
};

// Reproduction alphabet = orbit tuples of the points; rho(x, y) = average of
// d(T^u x, T^u y) over A (square, zero diagonal).
DistortionMatrix orbit_codebook(const SystemModel& sys, const GroupGrid& A);
DistortionMatrix orbit_codebook(const SystemModel& sys, int L);

struct RDPoint {
  double beta = 0.0;
  double D = 0.0;
  double R = 0.0;  // bits
  bool converged = true;
  std::size_t iterations = 0;
  std::vector<double> output;  // reproduction marginal q(y)
  Channel channel;             // filled when requested
};

struct BaOptions {
  double tol = 1e-9;
  std::size_t max_iter = 10000;
  bool keep_channels = false;
};

// Blahut-Arimoto over ascending betas with warm starts. Points that hit the
// iteration cap are returned with converged = false.
std::vector<RDPoint> ba_sweep(const Pmf& mu, const DistortionMatrix& rho, const std::vector<double>& betas,
                              const BaOptions& opt = {});

// 64 log-spaced slopes in [2^-6, 2^14], preceded by 0.
std::vector<double> default_betas();

// Zero-rate distortion min_y sum_x mu(x) rho(x, y).
double zero_rate_distortion(const Pmf& mu, const DistortionMatrix& rho);

struct RateResult {
  double R = 0.0;
  double D = 0.0;
  double beta = 0.0;
  bool converged = true;
  Channel channel;  // achieving channel (D <= eps)
  std::vector<double> output;
};

// R at distortion eps: the BA point on the feasible side (D <= eps) of a beta
// bisection, so the value is achievable. 0 if eps >= the zero-rate distortion.
RateResult rate_at_distortion(const Pmf& mu, const DistortionMatrix& rho, double eps, const BaOptions& opt = {});

struct RdistReport {
  double value = 0.0;                // min over L of R / L^d
  std::vector<double> per_L;         // R(eps, [0, L)^d) / L^d
  std::vector<double> per_L_raw;     // R(eps, [0, L)^d)
  std::vector<int> L_list;
};

RdistReport rdist_function(const SystemModel& sys, const MeasureOnPoints& mu, double eps,
                           const std::vector<int>& L_list, const BaOptions& opt = {});

struct RdimEstimate {
  double upper_slope = 0.0;  // max of R / log2(1/eps) over the finest half
  double lower_slope = 0.0;  // min of the same
  double lsq_slope = 0.0;    // least-squares slope of R against log2(1/eps)
  std::vector<double> eps;
  std::vector<double> R;
};

RdimEstimate rdim_estimate(const SystemModel& sys, const MeasureOnPoints& mu, const std::vector<double>& eps_grid,
                           const std::vector<int>& L_list, const BaOptions& opt = {});
RdimEstimate rdim_from_values(const std::vector<double>& eps_grid, const std::vector<double>& R);

struct KdConstant {
  double K = 0.0;
  double c = 0.0;
  double argmax_s = 0.0;
};

// bracket(s) = (1 + (2/ln 2)^s s^-s Gamma(s + 1))^{1/(s+1)}.
double kd_bracket(double s);
// c = sup_{s >= 0} bracket(s), K = 1 + log2 c. Cached.
const KdConstant& kd_constant();
double kd_lower_bound(double s, double eps, double K);

// -a eps + sum mu log2 lambda; throws FeasibilityViolated unless
// sum_x mu(x) lambda(x) 2^{-a rho(x, y)} <= 1 for every y.
double duality_bound(const std::vector<double>& lambda, double a, double eps, const Pmf& mu,
                     const DistortionMatrix& rho);
// Feasible lambda built from a reproduction marginal at slope a.
std::vector<double> duality_lambda(const Pmf& mu, const DistortionMatrix& rho, const std::vector<double>& output,
                                   double a);

struct QuantizerChannel {
  JointPmf joint;                 // (X, f(X)) with f(X) indexing cells
  std::vector<double> cell_mass;  // mu(E_i)
  std::vector<std::size_t> reps;  // x_i in U_i
  double I = 0.0;                 // = H(f(X))
  double D = 0.0;                 // E d(X, f(X))
  double max_distance = 0.0;      // sup d(x, f(x)) over the support
};

// f(E_i) = x_i with E_i = U_i minus the earlier sets and x_i the smallest point of U_i.
QuantizerChannel quantizer_channel(const std::vector<PointSet>& cover, const FiniteMetricSpace& m,
                                   const MeasureOnPoints& mu);

// log2 sum (1/eps)^{a_i} - sum (-p_i log2 p_i + p_i a_i log2(1/eps)); >= 0.
double free_energy_gap(const std::vector<double>& p, const std::vector<double>& a, double eps);

struct VariationalCell {
  int L = 0;
  double eps = 0.0;
  double lhs = 0.0;  // I / (L^d log(1/eps)) + int phi_L dmu / L^d
  double rhs = 0.0;  // log # / (L^d log(1/eps))
  double slack = 0.0;
  double quantizer_I = 0.0;
  double ba_R = 0.0;
  bool optimal = false;
};

VariationalCell variational_cell(const SystemModel& sys, const MeasureOnPoints& mu, int L, double eps,
                                 const SolverOptions& opt, bool with_ba = false);

struct ProductChannelCheck {
  double I_A = 0.0, I_B = 0.0, I_AB = 0.0;
  double D_A = 0.0, D_B = 0.0, D_AB = 0.0;
  double R_AB = 0.0;  // BA value on the union
  bool feasible = false;
  bool subadditive = false;
};

// Builds the product channel nu_A x nu_B for disjoint A, B and checks that it
// is feasible at eps on A u B with I <= I_A + I_B.
ProductChannelCheck product_channel_check(const SystemModel& sys, const MeasureOnPoints& mu, const GroupGrid& A,
                                          const GroupGrid& B, double eps, const BaOptions& opt = {});

}  // namespace mdlab
