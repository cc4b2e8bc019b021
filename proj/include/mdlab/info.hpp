#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mdlab {

// All logarithms in this library are base 2 (bits).
inline constexpr double kNormTol = 1e-12;

struct Pmf {
  std::vector<double> p;

  Pmf() = default;
  explicit Pmf(std::vector<double> values);  // validates normalization

  std::size_t size() const { return p.size(); }
  double operator[](std::size_t i) const { return p[i]; }

  static Pmf uniform(std::size_t n);
  static Pmf delta(std::size_t n, std::size_t at);
  // Normalizes nonnegative weights.
  static Pmf normalized(std::vector<double> weights);
};

// Row-major |X| x |Y| joint distribution.
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(std::size_t rows, std::size_t cols, std::vector<double> p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t x, std::size_t y) const { return p_[x * cols_ + y]; }
  const std::vector<double>& data() const { return p_; }

  Pmf marginal_x() const;
  Pmf marginal_y() const;
  JointPmf transposed() const;

  static JointPmf product(const Pmf& a, const Pmf& b);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> p_;
};

// Row-stochastic kernel nu(y | x).
class Channel {
 public:
  Channel() = default;
  Channel(std::size_t rows, std::size_t cols, std::vector<double> nu);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t x, std::size_t y) const { return nu_[x * cols_ + y]; }
  const std::vector<double>& data() const { return nu_; }

  JointPmf joint(const Pmf& input) const;
  Pmf output(const Pmf& input) const;

  static Channel binary_symmetric(double flip);
  static Channel identity(std::size_t n);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> nu_;
};

double entropy(const Pmf& p);
double entropy(std::span<const double> p);
double mutual_information(const JointPmf& j);
// I(input; output) for the joint input(x) nu(y|x).
double mutual_information(const Pmf& input, const Channel& nu);
// H(Y | X) for the joint of (X, Y).
double conditional_entropy(const JointPmf& j);
double binary_entropy(double p);

// sum a_i log(a_i / b_i) - (sum a_i) log(sum a_i / sum b_i); nonnegative.
double log_sum_gap(std::span<const double> a, std::span<const double> b);

// Coupling of mu_n (rows) and mu (columns): diagonal min(mu_n, mu), surpluses
// matched to deficits in index order. Off-diagonal mass equals TV(mu_n, mu).
JointPmf coupling_sequence(const Pmf& mu_n, const Pmf& mu);
double total_variation(const Pmf& a, const Pmf& b);

// Push-forward of (X, Y) under (f, g); f maps rows into [0, nf), g columns into [0, ng).
JointPmf quantize_channel(const JointPmf& j, std::span<const std::size_t> f, std::size_t nf,
                          std::span<const std::size_t> g, std::size_t ng);

}  // namespace mdlab
