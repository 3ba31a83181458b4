#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace sgblend {

// SplitMix64 (Steele/Lea/Flood). The generator is fixed here, in full, so
// every dataset, weight init and shuffle is reproducible from a single u64
// seed in any implementation of this harness.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller, cosine branch; consumes exactly two uniforms per call
  double gaussian() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  // Fisher-Yates, back to front
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::uint64_t state() const { return state_; }
  void set_state(std::uint64_t s) { state_ = s; }

 private:
  std::uint64_t state_;
};

// stream-th value of the SplitMix64 sequence started at base. Gives weight
// init (stream 0), the train/val split (stream 1) and each epoch's shuffle
// (stream 2 + epoch) independent deterministic seeds.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  SplitMix64 g(base);
  std::uint64_t s = 0;
  for (std::uint64_t i = 0; i <= stream; ++i) s = g.next_u64();
  return s;
}

}  // namespace sgblend
