#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace bracketlab {

/// SplitMix64 (Steele, Lea, Flood 2014). Bit-identical on every platform, which
/// std::normal_distribution is not.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on the open interval (0, 1); 53 random bits.
  double uniform() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Pair of independent N(0,1) samples by Box-Muller.
  std::pair<double, double> normal_pair() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  std::uint64_t state_;
};

/// Derive an independent stream seed from a base seed and a case index.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  SplitMix64 mix(base ^ (0x632be59bd9b4e019ULL * (index + 1)));
  return mix.next();
}

}  // namespace bracketlab
