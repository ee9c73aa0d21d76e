#ifndef QSIDECAR_RNG_HPP
#define QSIDECAR_RNG_HPP

// Portable seeded randomness.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are implementation-defined, so the
// uniform, normal and integer draws are done here by hand:
//   uniform01  = (engine() >> 11) * 2^-53
//   normal     = Box-Muller on two uniform01 draws, second value cached
//   index(n)   = rejection sampling on the top of the 64-bit range
// Per-trial seeds come from derive_seed(master, stream, index), a splitmix64
// chain, so results never depend on scheduling order.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>

namespace qsidecar {

inline constexpr std::uint64_t kDefaultSeed = 42;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                           std::uint64_t index = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

/// Stream tags for derive_seed. Values are part of the reproducibility
/// contract; do not renumber.
namespace stream {
inline constexpr std::uint64_t kAbstract = 0x41;
inline constexpr std::uint64_t kQaoaLandscape = 0x51;
inline constexpr std::uint64_t kQaoaSampling = 0x52;
inline constexpr std::uint64_t kShots = 0x53;
inline constexpr std::uint64_t kRouting = 0x61;
}  // namespace stream

class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (cached_) {
      const double v = *cached_;
      cached_.reset();
      return v;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(angle);
    return r * std::cos(angle);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("index() needs a nonempty range");
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> cached_;
};

}  // namespace qsidecar

#endif  // QSIDECAR_RNG_HPP
