// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "ordevo/evolution.hpp"

namespace ordevo {

enum class TaskKind { NumericFitness, TimeSeries };

/// Forecasting targets f(u), evaluated at u = t / time_scale.
enum class Target { Linear, Quadratic, Sine, SineOfTSineT };

struct FitnessTask {
  TaskKind kind = TaskKind::NumericFitness;
  Target target = Target::Linear;
  double time_scale = 100.0;

  static FitnessTask numeric() { return {}; }
  static FitnessTask time_series(Target target, double time_scale = 100.0) {
    return {TaskKind::TimeSeries, target, time_scale};
  }

  void validate() const;
};

/// Config names: "t", "t2", "sin", "tsint".
std::string_view target_name(Target target) noexcept;
Target parse_target(std::string_view name);

std::string_view task_kind_name(TaskKind kind) noexcept;
TaskKind parse_task_kind(std::string_view name);

/// f(t / time_scale); the substitution applies to every occurrence of the
/// argument, so sin(t sin t) becomes sin(u sin u).
double target_value(Target target, std::uint64_t t, double time_scale = 100.0);

/// NumericFitness: params[0]. TimeSeries: -|f(t/time_scale) - params[0]|.
double evaluate_fitness(const FitnessTask& task, std::span<const double> params,
                        std::uint64_t t);

inline double evaluate_fitness(const FitnessTask& task, const Genome& g,
                               std::uint64_t t) {
  return evaluate_fitness(task, g.params, t);
}

/// Fitness of every member at the population's own generation.
void evaluate_population(const FitnessTask& task, const Population& pop,
                         std::span<double> out);

}  // namespace ordevo
