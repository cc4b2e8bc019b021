#include "mdlab/info.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mdlab/errors.hpp"

namespace mdlab {

namespace {

void check_distribution(std::span<const double> p, const char* what) {
  double total = 0.0;
  for (double v : p) {
    require(v >= 0.0 && std::isfinite(v), ErrorCode::invalid_argument,
            std::string(what) + ": entries must be finite and nonnegative");
    total += v;
  }
  require(std::abs(total - 1.0) <= kNormTol * std::max<std::size_t>(1, p.size()),
          ErrorCode::invalid_argument, std::string(what) + ": must sum to 1");
}

// x log x with 0 log 0 = 0.
double xlogx(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

Pmf::Pmf(std::vector<double> values) : p(std::move(values)) { check_distribution(p, "Pmf"); }

Pmf Pmf::uniform(std::size_t n) {
  require(n > 0, ErrorCode::invalid_argument, "uniform pmf needs n > 0");
  return Pmf(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Pmf Pmf::delta(std::size_t n, std::size_t at) {
  std::vector<double> v(n, 0.0);
  v.at(at) = 1.0;
  return Pmf(std::move(v));
}

Pmf Pmf::normalized(std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  require(total > 0.0, ErrorCode::invalid_argument, "cannot normalize zero weights");
  for (double& w : weights) w /= total;
  return Pmf(std::move(weights));
}

JointPmf::JointPmf(std::size_t rows, std::size_t cols, std::vector<double> p)
    : rows_(rows), cols_(cols), p_(std::move(p)) {
  require(p_.size() == rows * cols, ErrorCode::invalid_argument, "joint pmf shape mismatch");
  check_distribution(p_, "JointPmf");
}

Pmf JointPmf::marginal_x() const {
  std::vector<double> m(rows_, 0.0);
  for (std::size_t x = 0; x < rows_; ++x)
    for (std::size_t y = 0; y < cols_; ++y) m[x] += p_[x * cols_ + y];
  return Pmf::normalized(std::move(m));
}

Pmf JointPmf::marginal_y() const {
  std::vector<double> m(cols_, 0.0);
  for (std::size_t x = 0; x < rows_; ++x)
    for (std::size_t y = 0; y < cols_; ++y) m[y] += p_[x * cols_ + y];
  return Pmf::normalized(std::move(m));
}

JointPmf JointPmf::transposed() const {
  std::vector<double> t(p_.size());
  for (std::size_t x = 0; x < rows_; ++x)
    for (std::size_t y = 0; y < cols_; ++y) t[y * rows_ + x] = p_[x * cols_ + y];
  return JointPmf(cols_, rows_, std::move(t));
}

JointPmf JointPmf::product(const Pmf& a, const Pmf& b) {
  std::vector<double> p(a.size() * b.size());
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < b.size(); ++y) p[x * b.size() + y] = a[x] * b[y];
  return JointPmf(a.size(), b.size(), std::move(p));
}

Channel::Channel(std::size_t rows, std::size_t cols, std::vector<double> nu)
    : rows_(rows), cols_(cols), nu_(std::move(nu)) {
  require(nu_.size() == rows * cols, ErrorCode::invalid_argument, "channel shape mismatch");
  for (std::size_t x = 0; x < rows_; ++x)
    check_distribution(std::span<const double>(nu_.data() + x * cols_, cols_), "Channel row");
}

JointPmf Channel::joint(const Pmf& input) const {
  require(input.size() == rows_, ErrorCode::invalid_argument, "channel input size mismatch");
  std::vector<double> p(nu_.size());
  for (std::size_t x = 0; x < rows_; ++x)
    for (std::size_t y = 0; y < cols_; ++y) p[x * cols_ + y] = input[x] * nu_[x * cols_ + y];
  return JointPmf(rows_, cols_, std::move(p));
}

Pmf Channel::output(const Pmf& input) const { return joint(input).marginal_y(); }

Channel Channel::binary_symmetric(double flip) {
  return Channel(2, 2, {1.0 - flip, flip, flip, 1.0 - flip});
}

Channel Channel::identity(std::size_t n) {
  std::vector<double> nu(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) nu[i * n + i] = 1.0;
  return Channel(n, n, std::move(nu));
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) h -= xlogx(v);
  return std::max(0.0, h);
}

double entropy(const Pmf& p) { return entropy(std::span<const double>(p.p)); }

double binary_entropy(double p) { return entropy(std::vector<double>{p, 1.0 - p}); }

double mutual_information(const JointPmf& j) {
  // Direct form sum p log(p / (p_x p_y)); agrees with H(X) + H(Y) - H(X,Y)
  // but avoids cancellation when I is tiny.
  const Pmf px = j.marginal_x();
  const Pmf py = j.marginal_y();
  double total = 0.0;
  for (std::size_t x = 0; x < j.rows(); ++x)
    for (std::size_t y = 0; y < j.cols(); ++y) {
      const double v = j(x, y);
      if (v > 0.0) total += v * std::log2(v / (px[x] * py[y]));
    }
  return std::max(0.0, total);
}

double mutual_information(const Pmf& input, const Channel& nu) {
  return mutual_information(nu.joint(input));
}

double conditional_entropy(const JointPmf& j) {
  const Pmf px = j.marginal_x();
  double h = 0.0;
  for (std::size_t x = 0; x < j.rows(); ++x) {
    if (px[x] <= 0.0) continue;
    for (std::size_t y = 0; y < j.cols(); ++y) {
      const double v = j(x, y);
      if (v > 0.0) h -= v * std::log2(v / px[x]);
    }
  }
  return std::max(0.0, h);
}

double log_sum_gap(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::invalid_argument, "log_sum_gap: size mismatch");
  double sa = 0.0, sb = 0.0, lhs = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    require(b[i] > 0.0, ErrorCode::nonpositive_b, "log_sum_gap: b must be positive");
    require(a[i] >= 0.0, ErrorCode::invalid_argument, "log_sum_gap: a must be nonnegative");
    sa += a[i];
    sb += b[i];
    if (a[i] > 0.0) lhs += a[i] * std::log2(a[i] / b[i]);
  }
  const double rhs = sa > 0.0 ? sa * std::log2(sa / sb) : 0.0;
  return lhs - rhs;
}

double total_variation(const Pmf& a, const Pmf& b) {
  require(a.size() == b.size(), ErrorCode::invalid_argument, "total_variation: size mismatch");
  double t = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) t += std::abs(a[i] - b[i]);
  return 0.5 * t;
}

JointPmf coupling_sequence(const Pmf& mu_n, const Pmf& mu) {
  require(mu_n.size() == mu.size(), ErrorCode::invalid_argument, "coupling: alphabet mismatch");
  const std::size_t n = mu.size();
  std::vector<double> pi(n * n, 0.0);
  std::vector<double> surplus(n), deficit(n);
  for (std::size_t a = 0; a < n; ++a) {
    const double common = std::min(mu_n[a], mu[a]);
    pi[a * n + a] = common;
    surplus[a] = mu_n[a] - common;
    deficit[a] = mu[a] - common;
  }
  std::size_t b = 0;
  for (std::size_t a = 0; a < n; ++a) {
    while (surplus[a] > 0.0 && b < n) {
      if (deficit[b] <= 0.0) {
        ++b;
        continue;
      }
      const double moved = std::min(surplus[a], deficit[b]);
      pi[a * n + b] += moved;
      surplus[a] -= moved;
      deficit[b] -= moved;
    }
  }
  // Rounding residue from the subtraction chain goes to the last deficit cell.
  double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  if (total != 1.0 && total > 0.0)
    for (double& v : pi) v /= total;
  return JointPmf(n, n, std::move(pi));
}

JointPmf quantize_channel(const JointPmf& j, std::span<const std::size_t> f, std::size_t nf,
                          std::span<const std::size_t> g, std::size_t ng) {
  require(f.size() == j.rows() && g.size() == j.cols(), ErrorCode::invalid_argument,
          "quantize_channel: map sizes must match the joint");
  std::vector<double> p(nf * ng, 0.0);
  for (std::size_t x = 0; x < j.rows(); ++x)
    for (std::size_t y = 0; y < j.cols(); ++y) {
      require(f[x] < nf && g[y] < ng, ErrorCode::invalid_argument, "quantize_channel: map out of range");
      p[f[x] * ng + g[y]] += j(x, y);
    }
  return JointPmf(nf, ng, std::move(p));
}

}  // namespace mdlab
