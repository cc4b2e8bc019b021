#include "mdlab/system.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "mdlab/errors.hpp"

namespace mdlab {

namespace {

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-9; }

}  // namespace

PotentialSpec PotentialSpec::parse(const std::string& name, double c) {
  if (name == "zero") return {PotentialKind::zero, 0.0};
  if (name == "const") return {PotentialKind::constant, c};
  if (name == "coord0") return {PotentialKind::coord0, 0.0};
  if (name == "sin" || name == "sine") return {PotentialKind::sine, 0.0};
  fail(ErrorCode::config_invalid, "unknown potential '" + name + "'");
}

std::string PotentialSpec::name() const {
  switch (kind) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::constant: return "const";
    case PotentialKind::coord0: return "coord0";
    case PotentialKind::sine: return "sin";
  }
  return "zero";
}

MeasureOnPoints::MeasureOnPoints(std::vector<double> w) : weights(std::move(w)) {
  double total = 0.0;
  for (double v : weights) {
    require(v >= 0.0 && std::isfinite(v), ErrorCode::invalid_argument, "measure weights must be >= 0");
    total += v;
  }
  require(std::abs(total - 1.0) <= 1e-12 * std::max<std::size_t>(1, weights.size()),
          ErrorCode::invalid_argument, "measure weights must sum to 1");
}

double MeasureOnPoints::integrate(const PotentialField& f) const {
  require(f.size() == weights.size(), ErrorCode::invalid_argument, "integrate: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * f[i];
  return s;
}

SystemModel SystemModel::shift(const ShiftParams& p, const PotentialSpec& phi) {
  require(p.q >= 2 && p.q <= 255, ErrorCode::invalid_argument, "shift alphabet must be in [2, 255]");
  require(p.d == 1 || p.d == 2, ErrorCode::invalid_argument, "shift rank must be 1 or 2");
  require(p.r >= 0 && p.Lmax >= 1, ErrorCode::invalid_argument, "shift needs r >= 0 and Lmax >= 1");
  require(p.decay > 0.0 && p.decay < 1.0, ErrorCode::invalid_argument, "weight decay must be in (0, 1)");
  require(phi.kind != PotentialKind::sine, ErrorCode::invalid_argument, "sin potential is defined for flows only");

  SystemModel s;
  s.kind_ = SystemKind::shift;
  s.rank_ = p.d;
  s.shift_ = p;
  s.phi_spec_ = phi;
  s.side_ = p.Lmax + 2 * p.r;
  s.cells_ = p.d == 1 ? static_cast<std::size_t>(s.side_) : static_cast<std::size_t>(s.side_) * s.side_;

  double count = std::pow(static_cast<double>(p.q), static_cast<double>(s.cells_));
  require(count <= static_cast<double>(p.cap), ErrorCode::cap_exceeded,
          "q^|W| = " + std::to_string(count) + " exceeds the point cap " + std::to_string(p.cap));
  s.n_ = static_cast<std::size_t>(std::llround(count));

  s.symbols_.assign(s.n_ * s.cells_, 0);
  for (std::size_t i = 0; i < s.n_; ++i) {
    std::size_t v = i;
    for (std::size_t c = s.cells_; c-- > 0;) {
      s.symbols_[i * s.cells_ + c] = static_cast<std::uint8_t>(v % p.q);
      v /= p.q;
    }
  }

  const double rho0 = p.rho0 < 0.0 ? 1.0 / (2.0 * p.q) : p.rho0;
  s.base_ = FiniteMetricSpace::from_function(
      s.n_, [&](std::size_t i, std::size_t j) { return s.shift_distance({0, 0}, i, j); }, rho0);

  std::vector<double> values(s.n_, 0.0);
  for (std::size_t i = 0; i < s.n_; ++i) values[i] = s.potential_at(GridNode{}, i);
  s.phi_ = PotentialField{std::move(values)};
  return s;
}

SystemModel SystemModel::rotation_flow(const FlowParams& p, const PotentialSpec& phi) {
  require(p.n_points >= 2, ErrorCode::invalid_argument, "rotation flow needs n_points >= 2");
  require(p.tau > 0.0, ErrorCode::invalid_argument, "rotation flow needs tau > 0");
  require(phi.kind != PotentialKind::coord0, ErrorCode::invalid_argument, "coord0 potential is defined for shifts only");

  SystemModel s;
  s.kind_ = SystemKind::flow;
  s.rank_ = 1;
  s.flow_ = p;
  s.phi_spec_ = phi;
  s.n_ = p.n_points;
  const double n = static_cast<double>(p.n_points);
  const double two_pi = 2.0 * std::numbers::pi;
  s.base_ = FiniteMetricSpace::from_function(
      s.n_,
      [&](std::size_t i, std::size_t j) {
        const double a = std::abs(static_cast<double>(i) - static_cast<double>(j)) * two_pi / n;
        return std::min(a, two_pi - a);
      },
      std::numbers::pi / n);
  std::vector<double> values(s.n_, 0.0);
  for (std::size_t i = 0; i < s.n_; ++i) {
    const double theta = two_pi * static_cast<double>(i) / n;
    switch (phi.kind) {
      case PotentialKind::sine: values[i] = std::sin(theta); break;
      case PotentialKind::constant: values[i] = phi.c; break;
      default: values[i] = 0.0; break;
    }
  }
  s.phi_ = PotentialField{std::move(values)};
  return s;
}

SystemModel SystemModel::point_map(FiniteMetricSpace base, PotentialField phi, std::vector<std::size_t> step) {
  const std::size_t n = base.size();
  require(phi.size() == n && step.size() == n, ErrorCode::invalid_argument, "point map: size mismatch");
  std::vector<char> hit(n, 0);
  for (std::size_t v : step) {
    require(v < n && !hit[v], ErrorCode::invalid_argument, "point map step must be a permutation");
    hit[v] = 1;
  }
  SystemModel s;
  s.kind_ = SystemKind::map;
  s.rank_ = 1;
  s.n_ = n;
  s.base_ = std::move(base);
  s.phi_ = std::move(phi);
  s.step_ = std::move(step);
  return s;
}

void SystemModel::check_applicable(const GroupGrid& A) const {
  require(A.rank == rank_, ErrorCode::invalid_argument, "group grid rank does not match the system");
  for (const auto& node : A.nodes) {
    if (kind_ == SystemKind::flow) continue;
    require(is_integer(node.u[0]) && is_integer(node.u[1]), ErrorCode::invalid_argument,
            "Z^d actions need lattice group elements");
    if (kind_ != SystemKind::shift) continue;
    for (int k = 0; k < rank_; ++k) {
      const long v = std::lround(node.u[k]);
      require(v >= 0 && v < shift_.Lmax, ErrorCode::window_exceeded,
              "group element outside the modeled window [0, " + std::to_string(shift_.Lmax) + ")^d");
    }
  }
}

std::size_t SystemModel::cell_of(std::array<int, 2> w) const {
  const int a = w[0] + shift_.r;
  if (rank_ == 1) return static_cast<std::size_t>(a);
  const int b = w[1] + shift_.r;
  return static_cast<std::size_t>(a) * side_ + static_cast<std::size_t>(b);
}

int SystemModel::symbol(std::size_t i, std::array<int, 2> w) const {
  return symbols_[i * cells_ + cell_of(w)];
}

std::size_t SystemModel::index_of(const std::vector<int>& symbols) const {
  require(symbols.size() == cells_, ErrorCode::invalid_argument, "configuration size mismatch");
  std::size_t idx = 0;
  for (int v : symbols) {
    require(v >= 0 && v < shift_.q, ErrorCode::invalid_argument, "symbol out of range");
    idx = idx * shift_.q + static_cast<std::size_t>(v);
  }
  return idx;
}

std::size_t SystemModel::translate(std::size_t i, std::array<int, 2> a) const {
  require(kind_ == SystemKind::shift, ErrorCode::invalid_argument, "translate is defined for shifts");
  std::vector<int> out(cells_, 0);
  const int lo = -shift_.r, hi = lo + side_;
  const int b_lo = rank_ == 2 ? lo : 0, b_hi = rank_ == 2 ? hi : 1;
  for (int w0 = lo; w0 < hi; ++w0)
    for (int w1 = b_lo; w1 < b_hi; ++w1) {
      const int s0 = w0 + a[0];
      const int s1 = w1 + (rank_ == 2 ? a[1] : 0);
      if (s0 < lo || s0 >= hi) continue;
      if (rank_ == 2 && (s1 < lo || s1 >= hi)) continue;
      out[cell_of({w0, w1})] = symbol(i, {s0, s1});
    }
  return index_of(out);
}

double SystemModel::shift_distance(std::array<int, 2> u, std::size_t i, std::size_t j) const {
  const int r = shift_.r;
  const double scale = 1.0 / (shift_.q - 1);
  const std::uint8_t* xi = symbols_.data() + i * cells_;
  const std::uint8_t* xj = symbols_.data() + j * cells_;
  double best = 0.0;
  const int b_lo = rank_ == 2 ? -r : 0, b_hi = rank_ == 2 ? r : 0;
  for (int v0 = -r; v0 <= r; ++v0)
    for (int v1 = b_lo; v1 <= b_hi; ++v1) {
      const std::size_t c = cell_of({u[0] + v0, u[1] + v1});
      const int diff = std::abs(static_cast<int>(xi[c]) - static_cast<int>(xj[c]));
      if (diff == 0) continue;
      const int norm = std::max(std::abs(v0), std::abs(v1));
      best = std::max(best, std::pow(shift_.decay, norm) * diff * scale);
    }
  return best;
}

std::size_t SystemModel::flow_step(double t) const {
  const double n = static_cast<double>(flow_.n_points);
  const long k = std::lround(t * flow_.alpha * n / (2.0 * std::numbers::pi));
  const long m = static_cast<long>(flow_.n_points);
  return static_cast<std::size_t>(((k % m) + m) % m);
}

std::size_t SystemModel::act(const GridNode& u, std::size_t i) const {
  switch (kind_) {
    case SystemKind::flow: return (i + flow_step(u.u[0])) % n_;
    case SystemKind::map: {
      long k = std::lround(u.u[0]);
      std::size_t p = i;
      if (k >= 0) {
        for (long t = 0; t < k; ++t) p = step_[p];
      } else {
        std::vector<std::size_t> inverse(n_);
        for (std::size_t a = 0; a < n_; ++a) inverse[step_[a]] = a;
        for (long t = 0; t < -k; ++t) p = inverse[p];
      }
      return p;
    }
    case SystemKind::shift: break;
  }
  fail(ErrorCode::invalid_argument, "shift points are acted on implicitly through coordinates");
}

double SystemModel::distance_at(const GridNode& u, std::size_t i, std::size_t j) const {
  if (kind_ == SystemKind::shift)
    return shift_distance({static_cast<int>(std::lround(u.u[0])), static_cast<int>(std::lround(u.u[1]))}, i, j);
  return base_(act(u, i), act(u, j));
}

double SystemModel::potential_at(const GridNode& u, std::size_t i) const {
  if (kind_ != SystemKind::shift) return phi_[act(u, i)];
  switch (phi_spec_.kind) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::constant: return phi_spec_.c;
    case PotentialKind::coord0: {
      const std::array<int, 2> w{static_cast<int>(std::lround(u.u[0])), static_cast<int>(std::lround(u.u[1]))};
      return static_cast<double>(symbol(i, w)) / (shift_.q - 1);
    }
    case PotentialKind::sine: break;
  }
  return 0.0;
}

SystemModel build_shift(int q, int d, int r, int Lmax, double weight_decay, const PotentialSpec& phi,
                        double rho0, std::size_t cap) {
  ShiftParams p;
  p.q = q;
  p.d = d;
  p.r = r;
  p.Lmax = Lmax;
  p.decay = weight_decay;
  p.rho0 = rho0;
  p.cap = cap;
  return SystemModel::shift(p, phi);
}

SystemModel build_rotation_flow(double alpha, std::size_t n_points, double tau, const PotentialSpec& phi) {
  return SystemModel::rotation_flow({alpha, n_points, tau}, phi);
}

SystemModel zd_reduction(const SystemModel& flow) {
  require(flow.kind() == SystemKind::flow, ErrorCode::invalid_argument, "zd_reduction needs a flow model");
  const GroupGrid unit = GroupGrid::quadrature_cube(flow.rank(), 1.0, flow.flow_params().tau);
  const std::size_t n = flow.size();
  auto base = FiniteMetricSpace::from_function(
      n,
      [&](std::size_t i, std::size_t j) {
        double s = 0.0;
        for (const auto& node : unit.nodes) s += node.weight * flow.distance_at(node, i, j);
        return s;
      },
      flow.rho0());
  std::vector<double> phi(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& node : unit.nodes) phi[i] += node.weight * flow.potential_at(node, i);
  std::vector<std::size_t> step(n);
  GridNode one;
  one.u = {1.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) step[i] = flow.act(one, i);
  return SystemModel::point_map(std::move(base), PotentialField{std::move(phi)}, std::move(step));
}

FiniteMetricSpace tame_metric(const FiniteMetricSpace& m) {
  const std::size_t n = m.size();
  std::vector<double> dist(n * n, 0.0);
  const double diam = m.spatial_diameter();
  for (std::size_t x = 0; x < n; ++x) {
    const auto rx = m.row(x);
    for (std::size_t y = x + 1; y < n; ++y) {
      const auto ry = m.row(y);
      double s = 0.0;
      double w = 0.5;
      for (std::size_t k = 0; k < n && w > 0.0; ++k, w *= 0.5) {
        s += w * std::abs(rx[k] - ry[k]);
        // Remaining terms are below one ulp of s.
        if (s > 0.0 && w * diam < s * 1e-17) break;
      }
      require(s > 0.0 || m(x, y) == 0.0, ErrorCode::degenerate_metric,
              "tame metric vanishes on distinct points " + std::to_string(x) + ", " + std::to_string(y));
      dist[x * n + y] = s;
      dist[y * n + x] = s;
    }
  }
  return FiniteMetricSpace(n, std::move(dist), m.rho0());
}

MeasureOnPoints product_measure(const SystemModel& sys, const Pmf& marginal) {
  require(sys.kind() == SystemKind::shift, ErrorCode::invalid_argument, "product measure needs a shift");
  require(marginal.size() == static_cast<std::size_t>(sys.shift_params().q), ErrorCode::invalid_argument,
          "marginal must be over the shift alphabet");
  const int lo = sys.window_lo(), hi = lo + sys.window_side();
  const int b_lo = sys.rank() == 2 ? lo : 0, b_hi = sys.rank() == 2 ? hi : 1;
  std::vector<double> w(sys.size(), 1.0);
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (int a = lo; a < hi; ++a)
      for (int b = b_lo; b < b_hi; ++b) w[i] *= marginal[static_cast<std::size_t>(sys.symbol(i, {a, b}))];
  // Renormalize away rounding so the measure passes the 1e-12 check.
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  return MeasureOnPoints(std::move(w));
}

double invariance_defect(const SystemModel& sys, const MeasureOnPoints& mu) {
  require(mu.size() == sys.size(), ErrorCode::invalid_argument, "measure size mismatch");
  if (sys.kind() != SystemKind::shift) {
    GridNode step;
    step.u = {sys.kind() == SystemKind::flow ? sys.flow_params().tau : 1.0, 0.0};
    double worst = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) worst = std::max(worst, std::abs(mu[sys.act(step, i)] - mu[i]));
    return worst;
  }
  // Compare the law of the pattern on W' (W minus its top slab along an axis)
  // with the law of the pattern on W' + e_axis.
  const int q = sys.shift_params().q;
  const int lo = sys.window_lo(), side = sys.window_side();
  double worst = 0.0;
  for (int axis = 0; axis < sys.rank(); ++axis) {
    std::map<std::uint64_t, double> here, there;
    for (std::size_t i = 0; i < sys.size(); ++i) {
      std::uint64_t k0 = 0, k1 = 0;
      const int a_hi = axis == 0 ? side - 1 : side;
      const int b_hi = sys.rank() == 2 ? (axis == 1 ? side - 1 : side) : 1;
      for (int a = 0; a < a_hi; ++a)
        for (int b = 0; b < b_hi; ++b) {
          const std::array<int, 2> w{lo + a, sys.rank() == 2 ? lo + b : 0};
          std::array<int, 2> w1 = w;
          w1[axis] += 1;
          k0 = k0 * q + static_cast<std::uint64_t>(sys.symbol(i, w));
          k1 = k1 * q + static_cast<std::uint64_t>(sys.symbol(i, w1));
        }
      here[k0] += mu[i];
      there[k1] += mu[i];
    }
    for (const auto& [k, v] : here) {
      auto it = there.find(k);
      worst = std::max(worst, std::abs(v - (it == there.end() ? 0.0 : it->second)));
    }
    for (const auto& [k, v] : there)
      if (!here.count(k)) worst = std::max(worst, v);
  }
  return worst;
}

bool is_invariant(const SystemModel& sys, const MeasureOnPoints& mu, double tol) {
  return invariance_defect(sys, mu) <= tol;
}

}  // namespace mdlab
