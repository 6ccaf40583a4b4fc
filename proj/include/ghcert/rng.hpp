#pragma once

#include <cstdint>
#include <vector>

namespace ghcert {

// Deterministic, platform-independent RNG. All randomness in the library
// flows from one 64-bit seed through named substreams, so results do not
// depend on std::distribution implementations or thread scheduling.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    // Modulo bias is irrelevant at our scales (n << 2^64), and the simple
    // form keeps streams reproducible.
    return n == 0 ? 0 : next_u64() % n;
  }

private:
  std::uint64_t state_;
};

// Derives an independent substream from (seed, tag). Used to give each
// fiber/leaf/restart its own stream regardless of evaluation order.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t tag) {
  SplitMix64 mixer(seed ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
  mixer.next_u64();
  return SplitMix64(mixer.next_u64());
}

// First k entries of a seeded uniform shuffle of {0, ..., n-1}.
inline std::vector<int> sample_without_replacement(int n, int k, SplitMix64& rng) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k > n) k = n;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

}  // namespace ghcert
