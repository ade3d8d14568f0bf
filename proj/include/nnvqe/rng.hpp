#pragma once

#include <cmath>
#include <cstdint>

namespace nnvqe {

inline constexpr double k_pi = 3.14159265358979323846;

// SplitMix64 step. Used instead of <random> engines so that a seed produces
// the same stream on every platform and standard library.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed and up to two indices
/// (e.g. training-point index and epoch), so per-point draws do not depend on
/// evaluation order.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t a = 0,
                               std::uint64_t b = 0) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= a * 0xff51afd7ed558ccdULL + 0x2545f4914f6cdd1dULL;
  h ^= splitmix64(s);
  s ^= b * 0xc4ceb9fe1a85ec53ULL + 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(s);
  return h;
}

/// Deterministic PRNG covering the few draw kinds the toolkit needs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Normal deviate via Box-Muller; the spare of each pair is cached.
  double normal(double mean = 0.0, double stddev = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * k_pi * u2);
    has_spare_ = true;
    return mean + stddev * r * std::cos(2.0 * k_pi * u2);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nnvqe
