#include "mdlab/lp.hpp"

#include <cmath>
#include <limits>

#include "mdlab/errors.hpp"

namespace mdlab {

LpResult simplex_maximize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                          const std::vector<double>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  require(b.size() == m, ErrorCode::invalid_argument, "simplex: b size mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    require(A[i].size() == n, ErrorCode::invalid_argument, "simplex: row size mismatch");
    require(b[i] >= 0.0, ErrorCode::invalid_argument, "simplex: b must be nonnegative");
  }
  constexpr double tol = 1e-12;
  // Columns 0..n-1 structural, n..n+m-1 slack; last column right-hand side.
  const std::size_t cols = n + m + 1;
  std::vector<double> t((m + 1) * cols, 0.0);
  auto at = [&](std::size_t r, std::size_t k) -> double& { return t[r * cols + k]; };
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) at(i, j) = A[i][j];
    at(i, n + i) = 1.0;
    at(i, cols - 1) = b[i];
    basis[i] = n + i;
  }
  // Objective row holds reduced costs -c (minimization of -c.x).
  for (std::size_t j = 0; j < n; ++j) at(m, j) = -c[j];

  LpResult res;
  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j)
      if (at(m, j) < -tol) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double a = at(i, enter);
      if (a <= tol) continue;
      const double ratio = at(i, cols - 1) / a;
      if (ratio < best - tol || (std::abs(ratio - best) <= tol && leave < m && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == m) {
      res.status = LpResult::Status::unbounded;
      return res;
    }
    const double piv = at(leave, enter);
    for (std::size_t k = 0; k < cols; ++k) at(leave, k) /= piv;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < cols; ++k) at(r, k) -= f * at(leave, k);
    }
    basis[leave] = enter;
    ++res.pivots;
  }
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = std::max(0.0, at(i, cols - 1));
  res.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
  return res;
}

}  // namespace mdlab
