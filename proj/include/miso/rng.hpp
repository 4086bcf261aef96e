// SPDX-License-Identifier: Apache-2.0
//
// Counter-addressed random streams.
//
// Every draw in the library is addressed by (seed, stream, index): the
// generator for sample k is rebuilt from those three words alone, so the
// value of sample k never depends on how a batch was partitioned across
// threads or on how many samples were requested.

#ifndef MISO_RNG_HPP
#define MISO_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace miso {

/// Stream identifiers. Distinct streams never share state for equal seeds.
enum class Stream : std::uint64_t {
  channel = 0x6368616e6e656cULL,
  coin = 0x636f696eULL,
  beamformer = 0x6265616d66ULL,
};

/// SplitMix64 finalizer; used only to expand (seed, stream, index) into a
/// well-mixed xoshiro state.
constexpr std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** seeded from a counter address. Satisfies
/// UniformRandomBitGenerator so it also plugs into <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t index) noexcept {
    std::uint64_t x = seed;
    x ^= splitmix64(x) + static_cast<std::uint64_t>(stream);
    x ^= splitmix64(x) + index;
    for (auto& s : state_) s = splitmix64(x);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Circularly-symmetric complex standard normal: E|z|^2 = 1, real and
  /// imaginary parts independent with variance 1/2 each (Box-Muller).
  std::complex<double> complex_normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

}  // namespace miso

#endif  // MISO_RNG_HPP
