#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace xysim {

/// SplitMix64 finalizer; used as a stable 64-bit hash for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable seed for stream `index` under `parent`. Independent of scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return mix64(mix64(parent) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Purpose tags for the independent sub-streams of one realization.
enum class Stream : std::uint64_t { positions = 1, disorder = 2, polarization = 3, couplings = 4 };

inline std::uint64_t derive_seed(std::uint64_t parent, Stream s) {
  return derive_seed(parent, static_cast<std::uint64_t>(s) << 56);
}

// Thin wrapper over mt19937_64 with distribution code we own, so that
// results do not depend on the standard library's distribution algorithms.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  /// Uniform in (0, 1), never returns the endpoints.
  double uniform_open() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Lemire-style rejection keeps it unbiased.
    const std::uint64_t limit = max() - max() % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r < limit) return r % n;
    }
  }

  /// Standard normal via Box-Muller (one value per call, deterministic).
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace xysim
