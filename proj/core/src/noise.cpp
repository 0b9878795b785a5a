// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "ordevo/noise.hpp"

#include <algorithm>
#include <cmath>

namespace ordevo {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// Uniform on the open interval (0, 1): midpoints of the 2^32 cells.
inline double open_uniform(std::uint32_t bits) noexcept {
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-32;
}

inline Philox4x32::Counter block_bits(std::uint64_t seed, std::uint64_t generation,
                                      std::uint64_t slot,
                                      std::uint32_t block) noexcept {
  const Philox4x32::Counter ctr{block, static_cast<std::uint32_t>(slot),
                                static_cast<std::uint32_t>(generation),
                                static_cast<std::uint32_t>(generation >> 32)};
  // Slots beyond 2^32 fold their high word into the key.
  const Philox4x32::Key key{
      static_cast<std::uint32_t>(seed),
      static_cast<std::uint32_t>(seed >> 32) ^
          static_cast<std::uint32_t>(slot >> 32)};
  return Philox4x32::apply(ctr, key);
}

}  // namespace

double inverse_normal_cdf(double p) noexcept {
  // Wichura, Algorithm AS 241 (PPND16), relative accuracy about 1e-16.
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852545925 + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                  0.24178072517745061177) * r + 1.27045825245236838258) * r +
                3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                  0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                  0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                  1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}


Philox4x32::Counter Philox4x32::apply(Counter ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

double NoiseStream::draw(std::uint64_t generation, std::uint64_t slot,
                         std::uint32_t param) const noexcept {
  const auto r = block_bits(seed_, generation, slot, param / 4);
  return inverse_normal_cdf(open_uniform(r[param % 4]));
}

void NoiseStream::fill(std::uint64_t generation, std::uint64_t slot,
                       std::span<double> out) const noexcept {
  const std::size_t n = out.size();
  for (std::size_t base = 0; base < n; base += 4) {
    const auto r =
        block_bits(seed_, generation, slot, static_cast<std::uint32_t>(base / 4));
    const std::size_t lanes = std::min<std::size_t>(4, n - base);
    for (std::size_t lane = 0; lane < lanes; ++lane) {
      out[base + lane] = inverse_normal_cdf(open_uniform(r[lane]));
    }
  }
}

}  // namespace ordevo
