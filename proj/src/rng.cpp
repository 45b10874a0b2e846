#include "rpmt/rng.hpp"

namespace rpmt {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_(master_seed), id_(stream_id) {
  std::uint64_t key = combine64(mix64(master_), mix64(id_));
  std::uint32_t words[8];
  for (int i = 0; i < 4; ++i) {
    key = mix64(key + static_cast<std::uint64_t>(i));
    words[2 * i] = static_cast<std::uint32_t>(key);
    words[2 * i + 1] = static_cast<std::uint32_t>(key >> 32);
  }
  std::seed_seq seq(words, words + 8);
  engine_.seed(seq);
}

}  // namespace rpmt
