#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "mdlab/metric.hpp"

namespace mdlab {

// FNV-1a 64-bit hash, stable across platforms and runs.
std::uint64_t stable_hash(const std::string& s);

// Distance matrices memoized on disk under $MEANDIM_CACHE_DIR (no caching
// when the variable is unset or empty). Unreadable or mismatched entries are
// recomputed and rewritten.
class MetricCache {
 public:
  MetricCache();
  explicit MetricCache(std::string dir);

  bool enabled() const { return !dir_.empty(); }
  FiniteMetricSpace get(const std::string& key, const std::function<FiniteMetricSpace()>& make);

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  std::string path_for(const std::string& key) const;

  std::string dir_;
  std::size_t hits_ = 0, misses_ = 0;
};

}  // namespace mdlab
