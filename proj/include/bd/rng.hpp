#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace bd {

// Seeded PRNG producing identical streams on every platform. The engine is
// MT19937-64 (fully specified by the standard); all value transforms are
// hand-rolled because std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased uniform in [0, n) via rejection sampling.
  std::uint64_t below(std::uint64_t n);

  // Fisher-Yates, high index down.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(below(i + 1));
      using std::swap;
      swap(v[i], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 step; used to derive sub-seeds and hash-seeded streams.
std::uint64_t splitmix64(std::uint64_t& state);

// FNV-1a; the stable 64-bit string hash used across the project.
std::uint64_t fnv1a64_bytes(const void* data, std::size_t len,
                            std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace bd
