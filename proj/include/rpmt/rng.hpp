#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rpmt {

// splitmix64 finalizer; used to key streams off (master_seed, stream_id).
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Order-sensitive combiner for nested stream ids.
constexpr std::uint64_t combine64(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ (mix64(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

std::uint64_t fnv1a64(std::string_view s);

// Reproducible random stream keyed by (master_seed, stream_id).
//
// Equal key pairs replay the same sequence bit for bit; distinct keys give
// statistically independent streams. A stream object must not be shared
// across concurrent callers; derive disjoint substreams instead. Monte
// Carlo kernels take the stream by const reference and only derive
// per-draw children, so a replication always sees the same draws no matter
// how the loop is scheduled.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_id = 0);

  RngStream substream(std::uint64_t child) const {
    return RngStream(master_, combine64(id_, child));
  }
  RngStream substream(std::string_view role) const {
    return substream(fnv1a64(role));
  }

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_id() const { return id_; }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t master_;
  std::uint64_t id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace rpmt
