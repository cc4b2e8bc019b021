#include "mdlab/cover.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

#include "mdlab/errors.hpp"
#include "mdlab/orbit.hpp"
#include "mdlab/parallel.hpp"

namespace mdlab {

SolveMode parse_mode(const std::string& s) {
  if (s == "exact") return SolveMode::exact;
  if (s == "greedy") return SolveMode::greedy;
  fail(ErrorCode::config_invalid, "mode must be exact or greedy, got '" + s + "'");
}

std::string to_string(SolveMode m) { return m == SolveMode::exact ? "exact" : "greedy"; }

void CoverFamily::add(PointSet set, double padded_diam) {
  sets.push_back(std::move(set));
  diam.push_back(padded_diam);
}

void CoverFamily::attach_potential(const PotentialField& phi) {
  sup_phi.resize(sets.size());
  for (std::size_t k = 0; k < sets.size(); ++k) sup_phi[k] = phi.sup_on(sets[k]);
}

namespace {

using Word = std::uint64_t;

struct Bits {
  std::vector<Word> w;

  explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i >> 6] |= Word{1} << (i & 63); }
  bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  bool none() const {
    for (Word v : w)
      if (v) return false;
    return true;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (Word v : w) c += static_cast<std::size_t>(std::popcount(v));
    return c;
  }
  std::size_t count_and(const Bits& o) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < w.size(); ++k) c += static_cast<std::size_t>(std::popcount(w[k] & o.w[k]));
    return c;
  }
  void subtract(const Bits& o) {
    for (std::size_t k = 0; k < w.size(); ++k) w[k] &= ~o.w[k];
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k] & ~o.w[k]) return false;
    return true;
  }
};

class Solver {
 public:
  Solver(std::vector<Bits> sets, std::vector<std::vector<std::size_t>> lists, std::vector<double> weights,
         std::size_t universe, double time_limit)
      : sets_(std::move(sets)), lists_(std::move(lists)), w_(std::move(weights)), universe_(universe),
        elem_sets_(universe) {
    for (std::size_t s = 0; s < lists_.size(); ++s)
      for (std::size_t e : lists_[s]) elem_sets_[e].push_back(s);
    deadline_ = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                         std::chrono::duration<double>(time_limit));
  }

  // Lazy greedy: ratios w / |S n open| only grow, so stale heap entries are
  // re-pushed. Ties go to the lowest set index.
  std::vector<std::size_t> greedy() const {
    std::vector<std::size_t> cnt(lists_.size());
    using Entry = std::tuple<double, std::size_t, std::size_t>;  // ratio, set, count
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (std::size_t s = 0; s < lists_.size(); ++s) {
      cnt[s] = lists_[s].size();
      if (cnt[s] > 0) heap.emplace(w_[s] / static_cast<double>(cnt[s]), s, cnt[s]);
    }
    std::vector<char> open(universe_, 1);
    std::size_t remaining = universe_;
    std::vector<std::size_t> chosen;
    while (remaining > 0) {
      auto [ratio, s, c] = heap.top();
      heap.pop();
      if (c != cnt[s]) {
        if (cnt[s] > 0) heap.emplace(w_[s] / static_cast<double>(cnt[s]), s, cnt[s]);
        continue;
      }
      chosen.push_back(s);
      for (std::size_t e : lists_[s]) {
        if (!open[e]) continue;
        open[e] = 0;
        --remaining;
        for (std::size_t t : elem_sets_[e]) --cnt[t];
      }
    }
    return prune_redundant(std::move(chosen));
  }

  double cost(const std::vector<std::size_t>& chosen) const {
    double c = 0.0;
    for (std::size_t s : chosen) c += w_[s];
    return c;
  }

  // Returns true if the search finished before the deadline.
  bool branch_and_bound(std::vector<std::size_t>& best, double& best_value) {
    best_ = best;
    best_value_ = best_value;
    Bits open(universe_);
    for (std::size_t e = 0; e < universe_; ++e) open.set(e);
    std::vector<std::size_t> stack;
    search(open, 0.0, stack);
    best = best_;
    best_value = best_value_;
    return !timed_out_;
  }

 private:
  std::vector<std::size_t> prune_redundant(std::vector<std::size_t> chosen) const {
    std::vector<int> hits(universe_, 0);
    for (std::size_t s : chosen)
      for (std::size_t e : lists_[s]) ++hits[e];
    std::vector<std::size_t> order(chosen);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return w_[a] != w_[b] ? w_[a] > w_[b] : a > b;
    });
    std::set<std::size_t> dropped;
    for (std::size_t s : order) {
      const auto& elems = lists_[s];
      if (std::all_of(elems.begin(), elems.end(), [&](std::size_t e) { return hits[e] > 1; })) {
        for (std::size_t e : elems) --hits[e];
        dropped.insert(s);
      }
    }
    std::vector<std::size_t> out;
    for (std::size_t s : chosen)
      if (!dropped.count(s)) out.push_back(s);
    return out;
  }

  void search(Bits open, double cost, std::vector<std::size_t>& stack) {
    if (timed_out_) return;
    if (++nodes_ % 256 == 0 && std::chrono::steady_clock::now() > deadline_) {
      timed_out_ = true;
      return;
    }
    const std::size_t depth = stack.size();
    std::vector<std::size_t> inter(sets_.size());
    // Take forced sets (an open element with a single useful set) in bulk.
    for (;;) {
      if (open.none()) break;
      for (std::size_t s = 0; s < sets_.size(); ++s) inter[s] = sets_[s].count_and(open);
      std::vector<std::size_t> forced;
      for (std::size_t e = 0; e < universe_; ++e) {
        if (!open.test(e)) continue;
        std::size_t only = sets_.size(), cnt = 0;
        for (std::size_t s : elem_sets_[e])
          if (inter[s] > 0) {
            ++cnt;
            only = s;
          }
        if (cnt == 1) forced.push_back(only);
      }
      if (forced.empty()) break;
      std::sort(forced.begin(), forced.end());
      forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
      for (std::size_t s : forced) {
        stack.push_back(s);
        cost += w_[s];
        open.subtract(sets_[s]);
      }
      if (cost >= best_value_ * (1.0 - 1e-12)) {
        stack.resize(depth);
        return;
      }
    }
    if (open.none()) {
      if (cost < best_value_ * (1.0 - 1e-12)) {
        best_value_ = cost;
        best_ = stack;
      }
      stack.resize(depth);
      return;
    }

    // Lower bound: every open element pays at least its cheapest per-element
    // share, and at least ceil(|open| / max coverage) sets of minimum weight.
    double lb = 0.0;
    std::size_t branch_elem = universe_, branch_deg = std::numeric_limits<std::size_t>::max();
    std::size_t max_inter = 0;
    double min_w = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < sets_.size(); ++s)
      if (inter[s] > 0) {
        max_inter = std::max(max_inter, inter[s]);
        min_w = std::min(min_w, w_[s]);
      }
    std::size_t open_count = 0;
    for (std::size_t e = 0; e < universe_; ++e) {
      if (!open.test(e)) continue;
      ++open_count;
      double share = std::numeric_limits<double>::infinity();
      std::size_t deg = 0;
      for (std::size_t s : elem_sets_[e])
        if (inter[s] > 0) {
          ++deg;
          share = std::min(share, w_[s] / static_cast<double>(inter[s]));
        }
      lb += share;
      if (deg < branch_deg) {
        branch_deg = deg;
        branch_elem = e;
      }
    }
    const double lb2 = std::ceil(static_cast<double>(open_count) / static_cast<double>(max_inter)) * min_w;
    if (cost + std::max(lb, lb2) >= best_value_ * (1.0 - 1e-12)) {
      stack.resize(depth);
      return;
    }

    std::vector<std::size_t> cand;
    for (std::size_t s : elem_sets_[branch_elem])
      if (inter[s] > 0) cand.push_back(s);
    std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
      return w_[a] * static_cast<double>(inter[b]) < w_[b] * static_cast<double>(inter[a]);
    });
    for (std::size_t s : cand) {
      Bits next = open;
      next.subtract(sets_[s]);
      stack.push_back(s);
      search(next, cost + w_[s], stack);
      stack.pop_back();
      if (timed_out_) break;
    }
    stack.resize(depth);
  }

  std::vector<Bits> sets_;
  std::vector<std::vector<std::size_t>> lists_;
  std::vector<double> w_;
  std::size_t universe_;
  std::vector<std::vector<std::size_t>> elem_sets_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<std::size_t> best_;
  double best_value_ = 0.0;
  bool timed_out_ = false;
  std::size_t nodes_ = 0;
};

}  // namespace

SetCoverResult solve_set_cover(std::size_t universe, const std::vector<PointSet>& sets,
                               const std::vector<double>& weights, const SolverOptions& opt,
                               const std::vector<std::vector<std::size_t>>& incumbents) {
  require(sets.size() == weights.size(), ErrorCode::invalid_argument, "set cover: weights size mismatch");
  for (double w : weights)
    require(w >= 0.0 && std::isfinite(w), ErrorCode::invalid_argument, "set cover weights must be nonnegative");
  SetCoverResult result;
  if (universe == 0) {
    result.optimal = true;
    return result;
  }

  // Collapse elements contained in exactly the same sets.
  std::vector<std::vector<std::size_t>> signature(universe);
  for (std::size_t s = 0; s < sets.size(); ++s)
    for (std::size_t e : sets[s]) {
      require(e < universe, ErrorCode::invalid_argument, "set cover: element out of range");
      signature[e].push_back(s);
    }
  std::map<std::vector<std::size_t>, std::size_t> classes;
  std::vector<std::size_t> class_of(universe);
  for (std::size_t e = 0; e < universe; ++e) {
    require(!signature[e].empty(), ErrorCode::infeasible, "no candidate set contains element " + std::to_string(e));
    auto [it, fresh] = classes.emplace(signature[e], classes.size());
    class_of[e] = it->second;
  }
  const std::size_t m = classes.size();

  std::vector<Bits> bits(sets.size(), Bits(m));
  std::vector<std::vector<std::size_t>> lists(sets.size());
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (std::size_t e : sets[s]) lists[s].push_back(class_of[e]);
    std::sort(lists[s].begin(), lists[s].end());
    lists[s].erase(std::unique(lists[s].begin(), lists[s].end()), lists[s].end());
    for (std::size_t e : lists[s]) bits[s].set(e);
  }

  // Drop empty and dominated sets (a superset that is no more expensive).
  // Candidate dominators of S all contain S's first element.
  std::vector<std::size_t> order(sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (lists[a].size() != lists[b].size()) return lists[a].size() > lists[b].size();
    return weights[a] < weights[b];
  });
  std::vector<std::vector<std::size_t>> kept_by_elem(m);
  std::vector<std::size_t> kept;
  for (std::size_t s : order) {
    if (lists[s].empty()) continue;
    bool dominated = false;
    for (std::size_t k : kept_by_elem[lists[s].front()])
      if (weights[k] <= weights[s] && bits[s].subset_of(bits[k])) {
        dominated = true;
        break;
      }
    if (dominated) continue;
    kept.push_back(s);
    for (std::size_t e : lists[s]) kept_by_elem[e].push_back(s);
  }
  std::sort(kept.begin(), kept.end());

  std::vector<Bits> kbits;
  std::vector<std::vector<std::size_t>> klists;
  std::vector<double> kw;
  for (std::size_t s : kept) {
    kbits.push_back(bits[s]);
    klists.push_back(lists[s]);
    kw.push_back(weights[s]);
  }
  Solver solver(std::move(kbits), std::move(klists), std::move(kw), m, opt.time_limit);

  std::vector<std::size_t> best = solver.greedy();
  double best_value = solver.cost(best);
  for (std::size_t& s : best) s = kept[s];
  for (const auto& inc : incumbents) {
    std::vector<char> covered(universe, 0);
    double v = 0.0;
    for (std::size_t s : inc) {
      require(s < sets.size(), ErrorCode::invalid_argument, "incumbent refers to an unknown set");
      v += weights[s];
      for (std::size_t e : sets[s]) covered[e] = 1;
    }
    require(std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; }), ErrorCode::not_a_cover,
            "incumbent does not cover the universe");
    if (v < best_value) {
      best_value = v;
      best = inc;
    }
  }

  bool optimal = false;
  if (opt.mode == SolveMode::exact && kept.size() <= opt.max_sets) {
    std::vector<std::size_t> local;
    double local_value = best_value;
    optimal = solver.branch_and_bound(local, local_value);
    if (local_value < best_value) {
      best_value = local_value;
      best.clear();
      for (std::size_t s : local) best.push_back(kept[s]);
    }
  }
  std::sort(best.begin(), best.end());
  best.erase(std::unique(best.begin(), best.end()), best.end());
  result.chosen = std::move(best);
  result.value = 0.0;
  for (std::size_t s : result.chosen) result.value += weights[s];
  result.optimal = optimal;
  return result;
}

NearLists::NearLists(const FiniteMetricSpace& m, double r) : radius(r), near(m.size()) {
  const std::size_t n = m.size();
  parallel_for(n, [&](std::size_t i) {
    const auto row = m.row(i);
    auto& out = near[i];
    for (std::size_t j = 0; j < n; ++j)
      if (row[j] < r) out.emplace_back(row[j], j);
    std::sort(out.begin(), out.end());
  });
}

CoverFamily ball_family(const FiniteMetricSpace& m, double eps) {
  require(eps > 0.0, ErrorCode::invalid_argument, "ball_family needs eps > 0");
  std::vector<std::size_t> all(m.size());
  std::iota(all.begin(), all.end(), 0);
  const NearLists near(m, eps - m.rho0());
  return ball_family(m, near, all, eps);
}

CoverFamily ball_family(const FiniteMetricSpace& m, const NearLists& near, std::span<const std::size_t> subset,
                        double eps) {
  require(eps > 0.0, ErrorCode::invalid_argument, "ball_family needs eps > 0");
  require(near.radius >= eps - m.rho0(), ErrorCode::invalid_argument, "near lists are too short for eps");
  CoverFamily family;
  if (eps <= m.rho0()) return family;
  std::vector<char> in_subset(m.size(), 0);
  for (std::size_t p : subset) in_subset[p] = 1;
  std::set<PointSet> seen;
  for (std::size_t x : subset) {
    PointSet ball;
    double diam = 0.0;
    const auto& list = near.near[x];
    std::size_t k = 0;
    while (k < list.size()) {
      const double rho = list[k].first;
      if (rho + m.rho0() >= eps) break;
      // Add every point at exactly this radius.
      std::size_t end = k;
      while (end < list.size() && list[end].first == rho) ++end;
      PointSet added;
      for (std::size_t t = k; t < end; ++t)
        if (in_subset[list[t].second]) added.push_back(list[t].second);
      k = end;
      if (added.empty()) continue;
      double grown = diam;
      for (std::size_t a : added) {
        const auto row = m.row(a);
        for (std::size_t b : ball) grown = std::max(grown, row[b]);
        for (std::size_t b : added) grown = std::max(grown, row[b]);
      }
      if (grown + m.rho0() >= eps) break;
      diam = grown;
      ball.insert(ball.end(), added.begin(), added.end());
      PointSet sorted = ball;
      std::sort(sorted.begin(), sorted.end());
      if (seen.insert(sorted).second) family.add(std::move(sorted), diam + m.rho0());
    }
  }
  // Deterministic order: by smallest element, then lexicographic.
  std::vector<std::size_t> order(family.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return family.sets[a] < family.sets[b]; });
  CoverFamily sorted;
  for (std::size_t k : order) sorted.add(family.sets[k], family.diam[k]);
  return sorted;
}

bool is_admissible_cover(const FiniteMetricSpace& m, std::span<const std::size_t> points,
                         const std::vector<PointSet>& sets, double eps) {
  std::vector<char> covered(m.size(), 0);
  for (const auto& s : sets) {
    if (s.empty() || m.padded_diameter(s) >= eps) return false;
    for (std::size_t p : s) covered[p] = 1;
  }
  return std::all_of(points.begin(), points.end(), [&](std::size_t p) { return covered[p] != 0; });
}

namespace {

CoverSolution solve_on_family(std::span<const std::size_t> points, const CoverFamily& f,
                              const std::vector<double>& weights, const SolverOptions& opt,
                              const std::vector<std::vector<std::size_t>>& incumbents) {
  std::vector<std::size_t> local(f.sets.empty() ? 0 : 1 + *std::max_element(points.begin(), points.end()),
                                 std::numeric_limits<std::size_t>::max());
  for (std::size_t k = 0; k < points.size(); ++k) local[points[k]] = k;
  std::vector<PointSet> sets(f.size());
  for (std::size_t s = 0; s < f.size(); ++s)
    for (std::size_t p : f.sets[s]) {
      require(p < local.size() && local[p] != std::numeric_limits<std::size_t>::max(), ErrorCode::invalid_argument,
              "cover family set leaves the point set");
      sets[s].push_back(local[p]);
    }
  const SetCoverResult r = solve_set_cover(points.size(), sets, weights, opt, incumbents);
  CoverSolution out;
  out.chosen = r.chosen;
  out.value = r.value;
  out.optimal = r.optimal;
  for (std::size_t s : r.chosen) out.sets.push_back(f.sets[s]);
  return out;
}

// Appends admissible extra sets (restricted to the subset) to the family and
// returns incumbents formed by extra sets that already cover the subset.
std::vector<std::vector<std::size_t>> merge_extras(const FiniteMetricSpace& m, CoverFamily& f,
                                                   std::span<const std::size_t> subset, double eps,
                                                   const std::vector<PointSet>& extra) {
  std::vector<char> in_subset(m.size(), 0);
  for (std::size_t p : subset) in_subset[p] = 1;
  std::map<PointSet, std::size_t> index;
  for (std::size_t s = 0; s < f.size(); ++s) index.emplace(f.sets[s], s);
  std::vector<std::size_t> inc;
  std::vector<char> covered(m.size(), 0);
  for (const auto& raw : extra) {
    PointSet s;
    for (std::size_t p : raw)
      if (p < m.size() && in_subset[p]) s.push_back(p);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) continue;
    const double pd = m.padded_diameter(s);
    if (pd >= eps) continue;
    auto it = index.find(s);
    if (it == index.end()) {
      it = index.emplace(s, f.size()).first;
      f.add(s, pd);
    }
    inc.push_back(it->second);
    for (std::size_t p : s) covered[p] = 1;
  }
  const bool covers = !inc.empty() && std::all_of(subset.begin(), subset.end(), [&](std::size_t p) { return covered[p] != 0; });
  if (!covers) return {};
  std::sort(inc.begin(), inc.end());
  inc.erase(std::unique(inc.begin(), inc.end()), inc.end());
  return {inc};
}

}  // namespace

CoverSolution min_cover(const FiniteMetricSpace& m, const CoverFamily& f, double eps, const SolverOptions& opt) {
  for (std::size_t s = 0; s < f.size(); ++s)
    require(!f.sets[s].empty() && f.diam[s] < eps, ErrorCode::invalid_argument,
            "cover family contains a set of padded diameter >= eps");
  std::vector<std::size_t> all(m.size());
  std::iota(all.begin(), all.end(), 0);
  return solve_on_family(all, f, std::vector<double>(f.size(), 1.0), opt, {});
}

CoverSolution covering_number_potential(const FiniteMetricSpace& m, const PotentialField& phi, double eps,
                                        const SolverOptions& opt, const std::vector<PointSet>& extra_sets) {
  require(eps > 0.0 && eps < 1.0, ErrorCode::invalid_argument, "covering number with potential needs 0 < eps < 1");
  std::vector<std::size_t> all(m.size());
  std::iota(all.begin(), all.end(), 0);
  const NearLists near(m, eps - m.rho0());
  return covering_number_potential(m, near, all, phi, eps, opt, extra_sets);
}

CoverSolution covering_number_potential(const FiniteMetricSpace& m, const NearLists& near,
                                        std::span<const std::size_t> subset, const PotentialField& phi,
                                        double eps, const SolverOptions& opt,
                                        const std::vector<PointSet>& extra_sets) {
  require(eps > 0.0 && eps < 1.0, ErrorCode::invalid_argument, "covering number with potential needs 0 < eps < 1");
  require(phi.size() == m.size(), ErrorCode::invalid_argument, "potential size mismatch");
  require(!subset.empty(), ErrorCode::invalid_argument, "cannot cover an empty set");
  require(eps > m.rho0(), ErrorCode::infeasible, "eps <= rho0: no set is small enough to cover a point");
  CoverFamily f = ball_family(m, near, subset, eps);
  const auto incumbents = merge_extras(m, f, subset, eps, extra_sets);
  f.attach_potential(phi);
  std::vector<double> weights(f.size());
  const double base = 1.0 / eps;
  for (std::size_t s = 0; s < f.size(); ++s) weights[s] = std::pow(base, f.sup_phi[s]);
  return solve_on_family(subset, f, weights, opt, incumbents);
}

std::vector<CoverRow> covering_table(const SystemModel& sys, const std::vector<int>& L_grid,
                                     const std::vector<double>& eps_grid, OrbitMetricKind metric,
                                     const SolverOptions& opt) {
  std::vector<CoverRow> rows;
  for (int L : L_grid) {
    const FiniteMetricSpace dl = metric == OrbitMetricKind::sup ? orbit_metric_sup(sys, L) : orbit_metric_avg(sys, L);
    const PotentialField phi = potential_integral(sys, L);
    const double vol = std::pow(static_cast<double>(L), sys.rank());
    for (double eps : eps_grid) {
      CoverRow row;
      row.L = L;
      row.eps = eps;
      row.metric = metric;
      if (eps <= dl.rho0()) {
        row.resolved = false;
        row.value = std::numeric_limits<double>::infinity();
        row.log_value = row.value;
        row.normalized = row.value;
        rows.push_back(row);
        continue;
      }
      const CoverSolution sol = covering_number_potential(dl, phi, eps, opt);
      row.value = sol.value;
      row.log_value = std::log2(sol.value);
      row.normalized = row.log_value / (vol * std::log2(1.0 / eps));
      row.optimal = sol.optimal;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace mdlab
