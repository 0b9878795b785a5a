// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ordevo/noise.hpp"

namespace ordevo {
namespace {

// Known-answer vectors published with Random123 (kat_vectors, philox4x32_10).
TEST(Philox4x32, KnownAnswerVectors) {
  EXPECT_EQ(Philox4x32::apply({0, 0, 0, 0}, {0, 0}),
            (Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::apply({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                              {0xffffffff, 0xffffffff}),
            (Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::apply({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                              {0xa4093822, 0x299f31d0}),
            (Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

// Reference quantiles from scipy.special.ndtri.
TEST(InverseNormalCdf, MatchesReferenceQuantiles) {
  struct Case {
    double p, z;
  };
  const Case cases[] = {
      {1.1641532182693481e-10, -6.3379577545537895},
      {0.001, -3.090232306167813},
      {0.025, -1.9599639845400545},
      {0.3, -0.5244005127080409},
      {0.5, 0.0},
      {0.8, 0.8416212335729143},
      {0.9999, 3.719016485455709},
  };
  for (const auto& c : cases) {
    EXPECT_NEAR(inverse_normal_cdf(c.p), c.z, 1e-14 * std::max(1.0, std::abs(c.z)))
        << "p = " << c.p;
  }
}

TEST(InverseNormalCdf, IsOddAroundOneHalf) {
  for (double p = 0.0005; p < 0.5; p += 0.0137) {
    EXPECT_NEAR(inverse_normal_cdf(p), -inverse_normal_cdf(1.0 - p), 1e-12);
  }
}

TEST(NoiseStream, DrawIsPureFunctionOfAddress) {
  const NoiseStream a(99), b(99);
  for (std::uint64_t t = 0; t < 5; ++t) {
    for (std::uint64_t s = 0; s < 7; ++s) {
      for (std::uint32_t i = 0; i < 9; ++i) {
        EXPECT_EQ(a.draw(t, s, i), b.draw(t, s, i));
      }
    }
  }
  // Evaluation order does not matter.
  const double late = a.draw(1000, 3, 2);
  (void)a.draw(0, 0, 0);
  EXPECT_EQ(a.draw(1000, 3, 2), late);
}

TEST(NoiseStream, FillAgreesWithDraw) {
  const NoiseStream noise(7);
  for (std::size_t len : {1u, 2u, 3u, 4u, 5u, 8u, 11u}) {
    std::vector<double> out(len);
    noise.fill(12, 34, out);
    for (std::uint32_t i = 0; i < len; ++i) {
      EXPECT_EQ(out[i], noise.draw(12, 34, i)) << "len " << len << " i " << i;
    }
  }
}

TEST(NoiseStream, DifferentSeedsAndAddressesDiffer) {
  const NoiseStream a(1), b(2);
  EXPECT_NE(a.draw(1, 1, 0), b.draw(1, 1, 0));
  EXPECT_NE(a.draw(1, 1, 0), a.draw(2, 1, 0));
  EXPECT_NE(a.draw(1, 1, 0), a.draw(1, 2, 0));
  EXPECT_NE(a.draw(1, 1, 0), a.draw(1, 1, 1));
  // High slot bits reach the key.
  EXPECT_NE(a.draw(1, 1, 0), a.draw(1, (std::uint64_t{1} << 32) | 1, 0));
}

// Moments and lag-one correlations along each address axis; 200k draws give
// a standard error of about 0.0022 for the mean and correlations.
TEST(NoiseStream, MomentsAndAxisCorrelations) {
  const NoiseStream noise(2026);
  constexpr int kCount = 200000;
  double sum = 0, sum2 = 0, sum4 = 0;
  double c_param = 0, c_slot = 0, c_gen = 0;
  for (int j = 0; j < kCount; ++j) {
    const auto s = static_cast<std::uint64_t>(j % 1000);
    const auto t = static_cast<std::uint64_t>(j / 1000);
    const double x = noise.draw(t, s, 0);
    sum += x;
    sum2 += x * x;
    sum4 += x * x * x * x;
    c_param += x * noise.draw(t, s, 1);
    c_slot += x * noise.draw(t, s + 1, 0);
    c_gen += x * noise.draw(t + 1, s, 0);
  }
  const double n = kCount;
  EXPECT_NEAR(sum / n, 0.0, 5 * 1 / std::sqrt(n));
  EXPECT_NEAR(sum2 / n, 1.0, 5 * std::sqrt(2.0 / n));
  EXPECT_NEAR(sum4 / n, 3.0, 5 * std::sqrt(96.0 / n));
  EXPECT_NEAR(c_param / n, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(c_slot / n, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(c_gen / n, 0.0, 5 / std::sqrt(n));
}

TEST(ZeroNoise, FillsZeros) {
  std::vector<double> out{1.0, 2.0, 3.0};
  ZeroNoise{}.fill(4, 5, out);
  EXPECT_EQ(out, (std::vector<double>{0.0, 0.0, 0.0}));
}

}  // namespace
}  // namespace ordevo
