#pragma once

#include <cstdint>
#include <cmath>
#include <utility>
#include <vector>

namespace stresskit {

// splitmix64: used to expand a master seed into independent sub-seeds
// (per participant, per tree, per replication). Output is fully defined
// by the input, so derived streams never depend on call order elsewhere.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  return splitmix64(s);
}

// xoshiro256** — the project-wide RNG. We do not use <random> engines or
// distributions because their outputs are not pinned by the standard and
// every artifact this tool writes must be reproducible byte for byte.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 bits of randomness.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t threshold = (0ULL - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Standard normal via the polar (Marsaglia) method. The spare is cached,
  // so draw counts stay deterministic for a given seed.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

  double next_exponential() {
    double u;
    do {
      u = next_double();
    } while (u <= 0.0);
    return -std::log(u);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4] = {};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Deterministic Fisher-Yates shuffle driven by the project RNG.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace stresskit
