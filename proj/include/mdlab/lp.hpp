#pragma once

#include <cstddef>
#include <vector>

namespace mdlab {

struct LpResult {
  enum class Status { optimal, unbounded } status = Status::optimal;
  std::vector<double> x;
  double value = 0.0;
  std::size_t pivots = 0;
};

// maximize c.x subject to A x <= b, x >= 0, with b >= 0 (so x = 0 is
// feasible). Dense tableau primal simplex with Bland's rule.
LpResult simplex_maximize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                          const std::vector<double>& c);

}  // namespace mdlab
