#pragma once

// Deterministic randomness.  Every stochastic routine takes an explicit Rng;
// seeds for independent jobs are derived from one root seed by stable hashing
// of (root, component, item), so results do not depend on thread count or
// platform.

#include <cstdint>
#include <random>
#include <string_view>

namespace progrd {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view component,
                                 std::uint64_t item = 0) {
  return splitmix64(splitmix64(root ^ fnv1a64(component)) ^ splitmix64(item + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view component,
                                 std::string_view item) {
  return derive_seed(root, component, fnv1a64(item));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n), unbiased by rejection.
  std::uint64_t uniform(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  Rng split(std::string_view component, std::uint64_t item = 0) {
    return Rng(derive_seed(next(), component, item));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace progrd
