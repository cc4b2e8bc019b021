#include "mdlab/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <vector>

namespace mdlab {

namespace {

constexpr std::uint64_t kMagic = 0x6d646c6162636d31ULL;

bool read_entry(const std::string& path, std::uint64_t tag, FiniteMetricSpace& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::uint64_t magic = 0, stored_tag = 0, n = 0;
  double rho0 = 0.0;
  in.read(reinterpret_cast<char*>(&magic), sizeof magic);
  in.read(reinterpret_cast<char*>(&stored_tag), sizeof stored_tag);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&rho0), sizeof rho0);
  if (!in || magic != kMagic || stored_tag != tag || n > (1ULL << 16)) return false;
  std::vector<double> dist(n * n);
  in.read(reinterpret_cast<char*>(dist.data()), static_cast<std::streamsize>(dist.size() * sizeof(double)));
  if (!in) return false;
  out = FiniteMetricSpace(n, std::move(dist), rho0);
  return true;
}

void write_entry(const std::string& path, std::uint64_t tag, const FiniteMetricSpace& m) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;
    const std::uint64_t magic = kMagic, n = m.size();
    const double rho0 = m.rho0();
    out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
    out.write(reinterpret_cast<const char*>(&tag), sizeof tag);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&rho0), sizeof rho0);
    out.write(reinterpret_cast<const char*>(m.data().data()),
              static_cast<std::streamsize>(m.data().size() * sizeof(double)));
    if (!out) return;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
}

}  // namespace

std::uint64_t stable_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

MetricCache::MetricCache() {
  if (const char* env = std::getenv("MEANDIM_CACHE_DIR")) dir_ = env;
}

MetricCache::MetricCache(std::string dir) : dir_(std::move(dir)) {}

std::string MetricCache::path_for(const std::string& key) const {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.dm", static_cast<unsigned long long>(stable_hash(key)));
  return (std::filesystem::path(dir_) / name).string();
}

FiniteMetricSpace MetricCache::get(const std::string& key, const std::function<FiniteMetricSpace()>& make) {
  if (!enabled()) return make();
  const std::string path = path_for(key);
  // A second hash guards against file-name collisions.
  const std::uint64_t tag = stable_hash("tag:" + key);
  FiniteMetricSpace m;
  if (read_entry(path, tag, m)) {
    ++hits_;
    return m;
  }
  ++misses_;
  m = make();
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (!ec) write_entry(path, tag, m);
  return m;
}

}  // namespace mdlab
