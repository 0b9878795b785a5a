// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <concepts>
#include <cstdint>
#include <span>

namespace ordevo {

/// Philox4x32-10 block cipher (Salmon et al., SC'11). Maps a 128-bit counter
/// and a 64-bit key to 128 pseudo-random bits.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) noexcept;
};

/// Counter-addressed standard-normal noise.
///
/// Every draw is a pure function of (seed, generation, slot, param): the same
/// address always yields the same value, whatever the evaluation order or
/// thread count. Params 4j..4j+3 share one Philox block, keyed by the seed
/// with counter (j, slot, generation); each 32-bit word becomes one draw
/// through the inverse normal CDF.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  double draw(std::uint64_t generation, std::uint64_t slot,
              std::uint32_t param) const noexcept;

  /// out[i] = draw(generation, slot, i) for every i.
  void fill(std::uint64_t generation, std::uint64_t slot,
            std::span<double> out) const noexcept;

 private:
  std::uint64_t seed_;
};

/// Standard normal quantile function on (0, 1).
double inverse_normal_cdf(double p) noexcept;

/// Anything that can supply noise for a (generation, slot) address.
template <typename T>
concept NoiseSource = requires(const T& src, std::uint64_t t, std::uint64_t s,
                               std::span<double> out) {
  { src.fill(t, s, out) } -> std::same_as<void>;
};

/// Always-zero noise; turns the engine into its deterministic skeleton.
struct ZeroNoise {
  void fill(std::uint64_t, std::uint64_t, std::span<double> out) const noexcept {
    for (double& v : out) v = 0.0;
  }
};

/// 64-bit mixing function (SplitMix64 finalizer) used to derive child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace ordevo
