#include "mdlab/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "mdlab/errors.hpp"
#include "mdlab/meandim.hpp"
#include "mdlab/orbit.hpp"

namespace mdlab {

Box Cube::box(int d) const {
  Box b;
  for (int k = 0; k < d; ++k) {
    b.lo[k] = corner[k];
    b.hi[k] = corner[k] + side;
  }
  return b;
}

BoxUnion BoxUnion::single(int d, const Box& b) { return {d, {b}}; }

BoxUnion BoxUnion::cells(const GroupGrid& A) {
  require(A.lattice, ErrorCode::invalid_argument, "cell union needs a lattice grid");
  BoxUnion u;
  u.d = A.rank;
  for (const auto& n : A.nodes) {
    Box b;
    for (int k = 0; k < A.rank; ++k) {
      b.lo[k] = n.u[k];
      b.hi[k] = n.u[k] + 1.0;
    }
    u.boxes.push_back(b);
  }
  return u;
}

bool intersects(const Box& a, const Box& b, int d) {
  for (int k = 0; k < d; ++k)
    if (!(a.lo[k] < b.hi[k] && b.lo[k] < a.hi[k])) return false;
  return true;
}

bool contains(const Box& outer, const Box& inner, int d) {
  for (int k = 0; k < d; ++k)
    if (inner.lo[k] < outer.lo[k] || inner.hi[k] > outer.hi[k]) return false;
  return true;
}

namespace {

void check_dim(int d) { require(d == 1 || d == 2, ErrorCode::invalid_argument, "box geometry needs d in {1, 2}"); }

void check_box(const Box& b, int d) {
  for (int k = 0; k < d; ++k)
    require(std::isfinite(b.lo[k]) && std::isfinite(b.hi[k]) && b.lo[k] <= b.hi[k], ErrorCode::unbounded_region,
            "box must be finite with lo <= hi");
}

std::vector<double> unique_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Occupancy on a coordinate-compressed grid with 2-D prefix counts.
class CompressedGrid {
 public:
  CompressedGrid(int d, std::vector<double> xs, std::vector<double> ys) : d_(d), xs_(std::move(xs)) {
    ys_ = d == 2 ? std::move(ys) : std::vector<double>{0.0, 1.0};
    nx_ = xs_.size() > 1 ? xs_.size() - 1 : 0;
    ny_ = ys_.size() > 1 ? ys_.size() - 1 : 0;
    occ_.assign(nx_ * ny_, 0);
  }

  static CompressedGrid of(const BoxUnion& A) {
    check_dim(A.d);
    std::vector<double> xs, ys;
    for (const auto& b : A.boxes) {
      check_box(b, A.d);
      xs.push_back(b.lo[0]);
      xs.push_back(b.hi[0]);
      if (A.d == 2) {
        ys.push_back(b.lo[1]);
        ys.push_back(b.hi[1]);
      }
    }
    CompressedGrid g(A.d, unique_sorted(xs), unique_sorted(ys));
    for (const auto& b : A.boxes) g.mark(b, 1);
    g.finish();
    return g;
  }

  void mark(const Box& b, unsigned char v) {
    if (nx_ == 0 || ny_ == 0) return;
    const auto [i0, i1] = span_of(xs_, b.lo[0], b.hi[0]);
    std::size_t j0 = 0, j1 = 1;
    if (d_ == 2) std::tie(j0, j1) = span_of(ys_, b.lo[1], b.hi[1]);
    for (std::size_t i = i0; i < i1; ++i)
      for (std::size_t j = j0; j < j1; ++j) occ_[i * ny_ + j] = v;
  }

  void finish() {
    pre_.assign((nx_ + 1) * (ny_ + 1), 0);
    for (std::size_t i = 0; i < nx_; ++i)
      for (std::size_t j = 0; j < ny_; ++j)
        pre_[(i + 1) * (ny_ + 1) + j + 1] = pre_[i * (ny_ + 1) + j + 1] + pre_[(i + 1) * (ny_ + 1) + j] -
                                            pre_[i * (ny_ + 1) + j] + occ_[i * ny_ + j];
  }

  double measure() const {
    double m = 0.0;
    for (std::size_t i = 0; i < nx_; ++i)
      for (std::size_t j = 0; j < ny_; ++j)
        if (occ_[i * ny_ + j]) m += cell_volume(i, j);
    return m;
  }

  bool empty() const { return count(0, nx_, 0, ny_) == 0; }

  // Does the open cube of radius r around c meet the set in positive measure?
  bool any_near(std::array<double, 2> c, double r) const {
    const auto [i0, i1] = overlap(xs_, c[0] - r, c[0] + r);
    std::size_t j0 = 0, j1 = ny_;
    if (d_ == 2) std::tie(j0, j1) = overlap(ys_, c[1] - r, c[1] + r);
    return i0 < i1 && j0 < j1 && count(i0, i1, j0, j1) > 0;
  }

  // Is the open cube of radius r around c inside the set up to a null set?
  bool all_near(std::array<double, 2> c, double r) const {
    if (nx_ == 0 || c[0] - r < xs_.front() || c[0] + r > xs_.back()) return false;
    if (d_ == 2 && (ny_ == 0 || c[1] - r < ys_.front() || c[1] + r > ys_.back())) return false;
    const auto [i0, i1] = overlap(xs_, c[0] - r, c[0] + r);
    std::size_t j0 = 0, j1 = ny_;
    if (d_ == 2) std::tie(j0, j1) = overlap(ys_, c[1] - r, c[1] + r);
    return count(i0, i1, j0, j1) == static_cast<long long>((i1 - i0) * (j1 - j0));
  }

  bool contains_point(std::array<double, 2> c) const { return cell_at(c); }

  // Measures of B_r and d(., r) by compressing the grid lines shifted by +-r.
  double dilation_measure(double r) const {
    if (r <= 0.0) return measure();
    return sweep(r, [&](std::array<double, 2> c) { return any_near(c, r); });
  }

  double boundary(double r) const {
    if (r <= 0.0) return 0.0;
    return sweep(r, [&](std::array<double, 2> c) { return any_near(c, r) && !all_near(c, r); });
  }

  std::array<double, 2> lower() const { return {xs_.empty() ? 0.0 : xs_.front(), ys_.front()}; }
  std::array<double, 2> upper() const { return {xs_.empty() ? 0.0 : xs_.back(), ys_.back()}; }

 private:
  static std::pair<std::size_t, std::size_t> span_of(const std::vector<double>& g, double lo, double hi) {
    const auto i0 = static_cast<std::size_t>(std::lower_bound(g.begin(), g.end(), lo) - g.begin());
    const auto i1 = static_cast<std::size_t>(std::lower_bound(g.begin(), g.end(), hi) - g.begin());
    return {i0, std::max(i0, i1)};
  }

  // Cells [g_i, g_{i+1}) with g_{i+1} > a and g_i < b.
  static std::pair<std::size_t, std::size_t> overlap(const std::vector<double>& g, double a, double b) {
    if (g.size() < 2) return {0, 0};
    const auto ub = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), a) - g.begin());
    const std::size_t i0 = ub == 0 ? 0 : ub - 1;
    const std::size_t i1 =
        std::min(static_cast<std::size_t>(std::lower_bound(g.begin(), g.end(), b) - g.begin()), g.size() - 1);
    return {i0, std::max(i0, i1)};
  }

  bool cell_at(std::array<double, 2> c) const {
    if (nx_ == 0 || c[0] < xs_.front() || c[0] >= xs_.back()) return false;
    const auto i = static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), c[0]) - xs_.begin()) - 1;
    std::size_t j = 0;
    if (d_ == 2) {
      if (ny_ == 0 || c[1] < ys_.front() || c[1] >= ys_.back()) return false;
      j = static_cast<std::size_t>(std::upper_bound(ys_.begin(), ys_.end(), c[1]) - ys_.begin()) - 1;
    }
    return occ_[i * ny_ + j] != 0;
  }

  long long count(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) const {
    const std::size_t w = ny_ + 1;
    return pre_[i1 * w + j1] - pre_[i0 * w + j1] - pre_[i1 * w + j0] + pre_[i0 * w + j0];
  }

  double cell_volume(std::size_t i, std::size_t j) const {
    double v = xs_[i + 1] - xs_[i];
    if (d_ == 2) v *= ys_[j + 1] - ys_[j];
    return v;
  }

  template <class Pred>
  double sweep(double r, Pred in) const {
    auto shifted = [&](const std::vector<double>& g) {
      std::vector<double> out;
      out.reserve(3 * g.size());
      for (double x : g) {
        out.push_back(x - r);
        out.push_back(x);
        out.push_back(x + r);
      }
      return unique_sorted(out);
    };
    const std::vector<double> sx = shifted(xs_);
    const std::vector<double> sy = d_ == 2 ? shifted(ys_) : std::vector<double>{0.0, 1.0};
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < sx.size(); ++i)
      for (std::size_t j = 0; j + 1 < sy.size(); ++j) {
        const std::array<double, 2> c{0.5 * (sx[i] + sx[i + 1]), 0.5 * (sy[j] + sy[j + 1])};
        if (in(c)) m += (sx[i + 1] - sx[i]) * (d_ == 2 ? sy[j + 1] - sy[j] : 1.0);
      }
    return m;
  }

  int d_;
  std::vector<double> xs_, ys_;
  std::size_t nx_ = 0, ny_ = 0;
  std::vector<unsigned char> occ_;
  std::vector<long long> pre_;
};

}  // namespace

double measure(const BoxUnion& A) { return CompressedGrid::of(A).measure(); }

double neighborhood_measure(const BoxUnion& A, double r) {
  require(r >= 0.0 && std::isfinite(r), ErrorCode::invalid_argument, "radius must be finite and >= 0");
  return CompressedGrid::of(A).dilation_measure(r);
}

double boundary_measure(const BoxUnion& A, double r) {
  require(r >= 0.0 && std::isfinite(r), ErrorCode::invalid_argument, "radius must be finite and >= 0");
  return CompressedGrid::of(A).boundary(r);
}

RasterRegion neighborhood(const BoxUnion& A, double r, double h) {
  require(r >= 0.0 && std::isfinite(r), ErrorCode::invalid_argument, "radius must be finite and >= 0");
  require(!A.boxes.empty(), ErrorCode::invalid_argument, "neighborhood of an empty union");
  const CompressedGrid g = CompressedGrid::of(A);
  RasterRegion out;
  out.d = A.d;
  if (h <= 0.0) {
    double side = std::numeric_limits<double>::infinity();
    for (const auto& b : A.boxes)
      for (int k = 0; k < A.d; ++k)
        if (b.hi[k] > b.lo[k]) side = std::min(side, b.hi[k] - b.lo[k]);
    require(std::isfinite(side), ErrorCode::invalid_argument, "all boxes are degenerate");
    h = side / 64.0;
  }
  out.h = h;
  const auto lo = g.lower();
  const auto hi = g.upper();
  for (int k = 0; k < A.d; ++k) {
    out.bbox.lo[k] = lo[k] - r;
    out.bbox.hi[k] = hi[k] + r;
    out.shape[k] = static_cast<std::size_t>(std::ceil((out.bbox.hi[k] - out.bbox.lo[k]) / h - 1e-9));
  }
  if (A.d == 1) out.shape[1] = 1;
  require(out.shape[0] * out.shape[1] <= (std::size_t{1} << 26), ErrorCode::budget_exceeded,
          "raster too fine for the region");
  out.occupied.assign(out.shape[0] * out.shape[1], 0);
  for (std::size_t i = 0; i < out.shape[0]; ++i)
    for (std::size_t j = 0; j < out.shape[1]; ++j) {
      const std::array<double, 2> c{out.bbox.lo[0] + (i + 0.5) * h, A.d == 2 ? out.bbox.lo[1] + (j + 0.5) * h : 0.5};
      out.occupied[i * out.shape[1] + j] = r > 0.0 ? g.any_near(c, r) : g.contains_point(c);
    }
  const double cell = A.d == 2 ? h * h : h;
  std::size_t filled = 0, edge = 0;
  for (std::size_t i = 0; i < out.shape[0]; ++i)
    for (std::size_t j = 0; j < out.shape[1]; ++j) {
      const bool v = out.occupied[i * out.shape[1] + j];
      filled += v;
      bool change = v && (i == 0 || i + 1 == out.shape[0] || (A.d == 2 && (j == 0 || j + 1 == out.shape[1])));
      if (i + 1 < out.shape[0] && out.occupied[(i + 1) * out.shape[1] + j] != v) change = true;
      if (i > 0 && out.occupied[(i - 1) * out.shape[1] + j] != v) change = true;
      if (A.d == 2 && j + 1 < out.shape[1] && out.occupied[i * out.shape[1] + j + 1] != v) change = true;
      if (A.d == 2 && j > 0 && out.occupied[i * out.shape[1] + j - 1] != v) change = true;
      edge += change;
    }
  out.measure = static_cast<double>(filled) * cell;
  out.exact_measure = g.dilation_measure(r);
  out.error_bound = static_cast<double>(edge) * cell;
  return out;
}

void check_tile_hypotheses(int d, const Box& A, const std::vector<std::vector<Cube>>& families, double eta,
                           double separation) {
  check_dim(d);
  check_box(A, d);
  const std::size_t k0 = families.size();
  require(k0 > 0, ErrorCode::hypothesis_violated, "no cube families");
  const double sep = separation > 0.0 ? separation : static_cast<double>(k0);
  std::vector<double> lmin(k0, std::numeric_limits<double>::infinity()), lmax(k0, 0.0);
  for (std::size_t k = 0; k < k0; ++k) {
    require(!families[k].empty(), ErrorCode::hypothesis_violated, "family " + std::to_string(k + 1) + " is empty");
    for (const auto& c : families[k]) {
      lmin[k] = std::min(lmin[k], c.side);
      lmax[k] = std::max(lmax[k], c.side);
    }
  }
  require(lmax[0] >= 1.0, ErrorCode::hypothesis_violated, "(1): l_max(C_1) < 1");
  for (std::size_t k = 0; k + 1 < k0; ++k) {
    std::ostringstream os;
    os << "(1): l_min(C_" << k + 2 << ") = " << lmin[k + 1] << " < " << sep << " * l_max(C_" << k + 1
       << ") = " << sep * lmax[k];
    require(lmin[k + 1] >= sep * lmax[k], ErrorCode::hypothesis_violated, os.str());
  }
  const BoxUnion region = BoxUnion::single(d, A);
  const double mA = measure(region);
  require(mA > 0.0, ErrorCode::hypothesis_violated, "A has measure zero");
  const double bd = boundary_measure(region, lmax.back());
  {
    std::ostringstream os;
    os << "(2): m(d(A, " << lmax.back() << ")) = " << bd << " >= (eta/3) m(A) = " << eta / 3.0 * mA;
    require(bd < eta / 3.0 * mA, ErrorCode::hypothesis_violated, os.str());
  }
  for (std::size_t k = 0; k < k0; ++k) {
    BoxUnion clipped{d, {}};
    for (const auto& c : families[k]) {
      Box b = c.box(d);
      bool keep = true;
      for (int a = 0; a < d; ++a) {
        b.lo[a] = std::max(b.lo[a], A.lo[a]);
        b.hi[a] = std::min(b.hi[a], A.hi[a]);
        keep = keep && b.lo[a] < b.hi[a];
      }
      if (keep) clipped.boxes.push_back(b);
    }
    const double covered = clipped.boxes.empty() ? 0.0 : measure(clipped);
    require(covered >= mA * (1.0 - 1e-12), ErrorCode::hypothesis_violated,
            "(3): family " + std::to_string(k + 1) + " does not cover A");
  }
}

std::vector<Cube> quasi_tile(int d, const Box& A, const std::vector<std::vector<Cube>>& families, double eta,
                             const TileOptions& opt, TileDiagnostics* diag) {
  check_dim(d);
  check_box(A, d);
  require(eta > 0.0, ErrorCode::invalid_argument, "eta must be positive");
  double max_side = 0.0;
  for (const auto& f : families)
    for (const auto& c : f) {
      require(c.side > 0.0 && std::isfinite(c.side), ErrorCode::invalid_argument, "cube side must be positive");
      for (int k = 0; k < d; ++k)
        require(std::isfinite(c.corner[k]), ErrorCode::unbounded_region, "cube corner must be finite");
      max_side = std::max(max_side, c.side);
    }
  if (opt.check_hypotheses) check_tile_hypotheses(d, A, families, eta, opt.separation);

  // Spatial hash with buckets of the largest side: a cube meets at most two
  // buckets per axis.
  const double bucket = max_side > 0.0 ? max_side : 1.0;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> grid;
  auto key = [&](std::int64_t a, std::int64_t b) { return a * 4000037LL + b; };
  auto bucket_range = [&](const Box& b, int k) {
    if (k >= d) return std::pair<std::int64_t, std::int64_t>{0, 0};
    return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(std::floor(b.lo[k] / bucket)),
                                                 static_cast<std::int64_t>(std::floor(b.hi[k] / bucket))};
  };
  std::vector<Cube> picked;
  std::vector<Box> picked_boxes;
  for (std::size_t k = families.size(); k-- > 0;) {
    std::vector<Cube> order = families[k];
    std::stable_sort(order.begin(), order.end(), [](const Cube& a, const Cube& b) { return a.corner < b.corner; });
    for (const auto& c : order) {
      const Box b = c.box(d);
      if (!contains(A, b, d)) continue;
      const auto [x0, x1] = bucket_range(b, 0);
      const auto [y0, y1] = bucket_range(b, 1);
      bool free = true;
      for (auto x = x0; x <= x1 && free; ++x)
        for (auto y = y0; y <= y1 && free; ++y) {
          const auto it = grid.find(key(x, y));
          if (it == grid.end()) continue;
          for (std::size_t p : it->second)
            if (intersects(picked_boxes[p], b, d)) {
              free = false;
              break;
            }
        }
      if (!free) continue;
      for (auto x = x0; x <= x1; ++x)
        for (auto y = y0; y <= y1; ++y) grid[key(x, y)].push_back(picked.size());
      picked.push_back(c);
      picked_boxes.push_back(b);
    }
  }

  // Leftover A minus the selection on the compressed grid of all edges.
  std::vector<double> xs{A.lo[0], A.hi[0]}, ys{A.lo[1], A.hi[1]};
  for (const auto& b : picked_boxes) {
    xs.push_back(b.lo[0]);
    xs.push_back(b.hi[0]);
    ys.push_back(b.lo[1]);
    ys.push_back(b.hi[1]);
  }
  CompressedGrid left(d, unique_sorted(xs), unique_sorted(ys));
  left.mark(A, 1);
  for (const auto& b : picked_boxes) left.mark(b, 0);
  left.finish();

  TileDiagnostics dg;
  const double mA = measure(BoxUnion::single(d, A));
  dg.leftover_measure = left.measure();
  dg.leftover_neighborhood = left.empty() ? 0.0 : left.dilation_measure(1.0);
  dg.bound = eta * mA;
  dg.k0 = families.size();
  if (!families.empty() && !families.back().empty()) {
    double lmax = 0.0;
    for (const auto& c : families.back()) lmax = std::max(lmax, c.side);
    dg.boundary = boundary_measure(BoxUnion::single(d, A), lmax);
  }
  if (diag) *diag = dg;
  if (!(dg.leftover_neighborhood < dg.bound)) {
    std::ostringstream os;
    os << "m(B_1(leftover)) = " << dg.leftover_neighborhood << " >= eta m(A) = " << dg.bound
       << " (leftover m = " << dg.leftover_measure << ")";
    fail(ErrorCode::selection_failed, os.str());
  }
  return picked;
}

namespace {

void require_nonnegative(const SystemModel& sys) {
  require(sys.potential().size() == 0 || sys.potential().min() >= 0.0, ErrorCode::negative_potential,
          "block coding needs a nonnegative potential");
}

bool lattice_eq(const GridNode& a, const GridNode& b, int rank) {
  return std::lround(a.u[0]) == std::lround(b.u[0]) && (rank == 1 || std::lround(a.u[1]) == std::lround(b.u[1]));
}

struct PartCover {
  double value = 1.0;
  std::vector<PointSet> sets;
  bool optimal = true;
};

PartCover cover_on(const SystemModel& sys, const PointSet& E, const GroupGrid& A, double eps,
                   const SolverOptions& opt, const std::vector<PointSet>& extra = {}) {
  const FiniteMetricSpace m = orbit_metric_sup(sys, A);
  const PotentialField phi = potential_integral(sys, A);
  require(m.rho0() < eps, ErrorCode::infeasible, "eps must exceed the resolution floor");
  const NearLists near(m, eps - m.rho0());
  const CoverSolution sol = covering_number_potential(m, near, E, phi, eps, opt, extra);
  return {sol.value, sol.sets, sol.optimal};
}

constexpr std::size_t kIntersectionCap = 200000;

}  // namespace

BlockCodingCheck block_coding_check(const SystemModel& sys, const PointSet& E, const GroupGrid& A,
                                    const std::vector<GroupGrid>& parts, double eps, const SolverOptions& opt) {
  require(eps > 0.0 && eps < 1.0, ErrorCode::invalid_argument, "eps must lie in (0, 1)");
  require(!E.empty(), ErrorCode::invalid_argument, "E must be nonempty");
  require(A.lattice && !parts.empty(), ErrorCode::invalid_argument, "block coding needs lattice A and parts");
  require_nonnegative(sys);
  for (const auto& u : A.nodes) {
    bool found = false;
    for (const auto& p : parts) {
      require(p.lattice && p.rank == A.rank, ErrorCode::invalid_argument, "parts must be lattice grids of A's rank");
      for (const auto& v : p.nodes)
        if (lattice_eq(u, v, A.rank)) {
          found = true;
          break;
        }
      if (found) break;
    }
    require(found, ErrorCode::not_covering, "A is not inside the union of the parts");
  }

  BlockCodingCheck out;
  out.rhs = 1.0;
  // Intersections of the part covers form an admissible cover for d_A; it is
  // offered to the solver so lhs <= rhs holds even for heuristic solves.
  std::set<PointSet> meet{E};
  bool meet_ok = true;
  for (const auto& p : parts) {
    const PartCover pc = cover_on(sys, E, p, eps, opt);
    out.part_values.push_back(pc.value);
    out.rhs *= pc.value;
    out.optimal = out.optimal && pc.optimal;
    if (!meet_ok) continue;
    std::set<PointSet> next;
    for (const auto& s : meet)
      for (const auto& u : pc.sets) {
        PointSet both;
        std::set_intersection(s.begin(), s.end(), u.begin(), u.end(), std::back_inserter(both));
        if (!both.empty()) next.insert(std::move(both));
      }
    meet = std::move(next);
    if (meet.size() > kIntersectionCap) meet_ok = false;
  }
  std::vector<PointSet> extra;
  if (meet_ok) extra.assign(meet.begin(), meet.end());
  const PartCover whole = cover_on(sys, E, A, eps, opt, extra);
  out.lhs = whole.value;
  out.optimal = out.optimal && whole.optimal;
  out.ok = out.lhs <= out.rhs * (1.0 + 1e-9);
  return out;
}

CrudeEstimateCheck crude_estimate_check(const SystemModel& sys, const GroupGrid& A, double eps,
                                        const SolverOptions& opt) {
  require(A.lattice && !A.nodes.empty(), ErrorCode::invalid_argument, "crude estimate needs a nonempty lattice A");
  require_nonnegative(sys);
  PointSet all(sys.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<GroupGrid> cells;
  for (const auto& u : A.nodes) {
    GroupGrid g;
    g.rank = A.rank;
    g.nodes = {u};
    cells.push_back(g);
  }
  const BlockCodingCheck bc = block_coding_check(sys, all, A, cells, eps, opt);
  const PartCover base = cover_on(sys, all, GroupGrid::lattice_cube(A.rank, 1), eps, opt);
  CrudeEstimateCheck out;
  out.log_lhs = std::log2(bc.lhs);
  out.log_base = std::log2(base.value);
  out.exponent = neighborhood_measure(BoxUnion::cells(A), 1.0);
  out.log_rhs = out.exponent * out.log_base;
  out.optimal = bc.optimal && base.optimal;
  out.ok = out.log_lhs <= out.log_rhs + 1e-9;
  return out;
}

BowenReport bowen_report(const SystemModel& sys, double delta, double beta, double eps, int L,
                         const std::vector<int>& L_grid, const SolverOptions& opt) {
  require(sys.kind() == SystemKind::shift, ErrorCode::invalid_argument, "the Bowen report runs on shifts");
  require_nonnegative(sys);
  const int D = sys.shift_params().r;
  require(L >= 1 && L + 2 * D <= sys.budget(), ErrorCode::window_exceeded, "L + 2r exceeds the window budget");
  BowenReport rep;
  rep.L = L;
  rep.D = D;
  const LocalFormulaReport lf = local_formula_report(sys, delta, {eps}, L_grid, opt);
  require(!lf.rows.empty() && lf.rows.front().resolved, ErrorCode::infeasible, "eps is below the resolution floor");
  const double l = std::log2(1.0 / eps);
  rep.a = lf.rows.front().local / l;

  // Translation invariance puts [-D, L + D) at [0, L + 2D) and [0, L) at [D, D + L).
  const int rank = sys.rank();
  const FiniteMetricSpace outer = orbit_metric_sup(sys, GroupGrid::lattice_cube(rank, L + 2 * D));
  const GroupGrid inner = GroupGrid::lattice_box(rank, {D, D}, {D + L, D + L});
  const FiniteMetricSpace dl = orbit_metric_sup(sys, inner);
  const PotentialField phi = potential_integral(sys, inner);
  const NearLists near(dl, eps - dl.rho0());
  std::set<PointSet> seen;
  double worst = 0.0;
  for (std::size_t x = 0; x < sys.size(); ++x) {
    PointSet f = delta_fiber(outer, x, delta);
    if (!seen.insert(f).second) continue;
    worst = std::max(worst, std::log2(covering_number_potential(dl, near, f, phi, eps, opt).value));
  }
  rep.log_lhs = worst;
  rep.log_rhs = (rep.a + beta) * std::pow(static_cast<double>(L), rank) * l;
  rep.holds = rep.log_lhs <= rep.log_rhs + 1e-9;
  return rep;
}

}  // namespace mdlab
