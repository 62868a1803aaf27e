#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace ricfb {

/// Counter-based deterministic random stream. Every draw is a pure function
/// of (key subkeys..., counter), so sub-streams are independent of iteration
/// order and safe to evaluate from parallel workers.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::initializer_list<std::uint64_t> subkeys = {})
      : key_(mix(seed ^ 0x9e3779b97f4a7c15ULL)) {
    for (std::uint64_t s : subkeys) key_ = mix(key_ ^ mix(s + 0x8000000000000001ULL));
  }

  SeededRng derive(std::uint64_t subkey) const {
    SeededRng r(*this);
    r.key_ = mix(r.key_ ^ mix(subkey + 0x8000000000000001ULL));
    return r;
  }

  /// Uniform double in (0, 1), never exactly 0.
  double uniform(std::uint64_t counter) const {
    std::uint64_t v = mix(key_ ^ mix(counter + 0x2545f4914f6cdd1dULL));
    return (static_cast<double>(v >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Circularly symmetric complex Gaussian CN(0, 1): two N(0, 1/2) parts.
  std::complex<double> cgauss(std::uint64_t counter) const {
    double u1 = uniform(2 * counter);
    double u2 = uniform(2 * counter + 1);
    double r = std::sqrt(-std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace ricfb
