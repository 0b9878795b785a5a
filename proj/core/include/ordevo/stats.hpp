// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace ordevo::stats {

/// Summation is left to right; results depend only on element order.
double mean(std::span<const double> xs);

/// Sample (n-1) standard deviation; 0 for fewer than two values.
double sample_stddev(std::span<const double> xs);

/// sample_stddev / sqrt(n).
double sem(std::span<const double> xs);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope*x + intercept.
LinearFit least_squares(std::span<const double> xs, std::span<const double> ys);

}  // namespace ordevo::stats
