#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace plrf {

// Counter-based generator: every variate is a pure function of (key, counter),
// so streams can be split per task and entries generated in any order.
namespace detail {
inline uint64_t mix_bits(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t hash_combine(uint64_t key, uint64_t word) {
  uint64_t z = key + 0x9e3779b97f4a7c15ULL * (word + 1);
  z = mix_bits(z);
  z ^= key ^ (word * 0xd1b54a32d192ed03ULL);
  return mix_bits(z);
}
}  // namespace detail

class CounterRng {
 public:
  explicit CounterRng(uint64_t key) : key_(key) {}

  // Hash-chains a seed with a path of tags, e.g. {kTagMatrix, d, replicate}.
  static CounterRng derive(uint64_t seed, std::initializer_list<uint64_t> path) {
    uint64_t k = detail::mix_bits(seed ^ 0x6a09e667f3bcc909ULL);
    for (uint64_t word : path) k = detail::hash_combine(k, word);
    return CounterRng(k);
  }

  uint64_t bits(uint64_t ctr) const { return detail::hash_combine(key_, ctr); }

  // Uniform on (0, 1]; never returns 0 so log() stays finite.
  double uniform(uint64_t ctr) const {
    return static_cast<double>((bits(ctr) >> 11) + 1) * 0x1.0p-53;
  }

  // One N(0,1) variate per counter (Box-Muller, cosine branch).
  double normal(uint64_t ctr) const {
    const double u1 = uniform(2 * ctr);
    const double u2 = uniform(2 * ctr + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  uint64_t key() const { return key_; }

 private:
  uint64_t key_;
};

// Sequential adapter over a CounterRng for code that consumes a stream.
class RngStream {
 public:
  explicit RngStream(CounterRng rng) : rng_(rng) {}
  double normal() { return rng_.normal(ctr_++); }
  double uniform() { return rng_.uniform(ctr_++ + (1ULL << 62)); }

 private:
  CounterRng rng_;
  uint64_t ctr_ = 0;
};

// Stream tags; a fixed registry keeps independent uses from colliding.
inline constexpr uint64_t kTagMatrix = 0x11;   // entries of W
inline constexpr uint64_t kTagSgdNoise = 0x22; // per-run SGD sample stream
inline constexpr uint64_t kTagReplicate = 0x33;

}  // namespace plrf
