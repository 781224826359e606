// Deterministic random source. All draws go through fixed transforms of
// mt19937_64 output so that sequences are identical across platforms and
// standard-library versions (std::uniform_real_distribution is not portable).
#pragma once

#include <cstdint>
#include <random>

namespace ringrc {

class rng {
 public:
  explicit rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; caches the second variate.
  double normal(double mean, double sigma) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + sigma * spare_;
    }
    // 1 - u in (0, 1] keeps the log argument nonzero.
    double r = std::sqrt(-2.0 * std::log(1.0 - uniform01()));
    double theta = two_pi_ * uniform01();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mean + sigma * r * std::cos(theta);
  }

  // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t integer(std::uint64_t n) {
    const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

 private:
  static constexpr double two_pi_ = 6.28318530717958647692;
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Independent child seed for a named stream of a base seed (splitmix64 mix),
// so one run seed fans out to per-channel input and mask generators.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace ringrc
