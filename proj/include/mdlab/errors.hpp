#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdlab {

enum class ErrorCode {
  invalid_argument,
  window_exceeded,
  cap_exceeded,
  incompatible_grid,
  degenerate_metric,
  infeasible,
  invalid_exponent,
  no_convergence,
  nonpositive_b,
  feasibility_violated,
  not_a_cover,
  non_invariant_measure,
  hypothesis_violated,
  selection_failed,
  negative_potential,
  not_covering,
  unbounded_region,
  config_invalid,
  budget_exceeded,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace mdlab
