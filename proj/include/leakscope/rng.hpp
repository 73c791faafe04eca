#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace leakscope {

// Counter-based SplitMix64 generator. Output i of a stream is
// mix(origin + i * GAMMA), so streams derived from (seed, worker) are
// reproducible across platforms and independent of call interleaving.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t worker) {
    // Decorrelate worker streams by hashing the pair before use.
    std::uint64_t s = mix(seed ^ 0x9e3779b97f4a7c15ull);
    s = mix(s + worker * 0xbf58476d1ce4e5b9ull);
    return Rng(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via Box-Muller (pair cached).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Circularly symmetric complex normal CN(0, 1).
  std::complex<double> cnormal() {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    return {normal() * inv_sqrt2, normal() * inv_sqrt2};
  }

  double exponential(double mean) { return -mean * std::log(uniform()); }

  // Gamma(shape = k integer, scale) as a sum of exponentials.
  double gamma_int(int k, double scale) {
    double acc = 0.0;
    for (int i = 0; i < k; ++i) acc += std::log(uniform());
    return -scale * acc;
  }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace leakscope
