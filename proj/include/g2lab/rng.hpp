// Deterministic random inputs for property suites.
//
// The generator is a splitmix64 stream so that reports are reproducible
// across platforms and independent of how trials are scheduled: every trial
// is seeded by (run seed, check id hash, trial index) alone.

#ifndef G2LAB_RNG_HPP
#define G2LAB_RNG_HPP

#include <cstdint>
#include <string_view>

#include "scalar.hpp"

namespace g2lab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [lo, hi].
  long long uniform_int(long long lo, long long hi) {
    return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Uniform double in (0, 1).
  double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Small rational with numerator in [-num_max, num_max], denominator in [1, den_max].
  Rational small_rational(long long num_max = 6, long long den_max = 4) {
    return Rational(uniform_int(-num_max, num_max), uniform_int(1, den_max));
  }

  template <class S>
  S small_scalar(long long num_max = 6, long long den_max = 4) {
    if constexpr (scalar_traits<S>::exact)
      return small_rational(num_max, den_max);
    else
      return uniform(-3.0, 3.0);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Stream seed for one trial of one named check.
inline std::uint64_t trial_seed(std::uint64_t run_seed, std::string_view check_id, std::uint64_t trial) {
  std::uint64_t h = fnv1a(check_id);
  return run_seed ^ (h + 0x9e3779b97f4a7c15ULL) ^ (trial * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
}

}  // namespace g2lab

#endif
