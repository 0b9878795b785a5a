// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "ordevo/fitness.hpp"

#include <cmath>

namespace ordevo {

void FitnessTask::validate() const {
  if (!(std::isfinite(time_scale) && time_scale > 0.0)) {
    throw ValidationError("time_scale must be a finite positive number");
  }
}

std::string_view target_name(Target target) noexcept {
  switch (target) {
    case Target::Linear: return "t";
    case Target::Quadratic: return "t2";
    case Target::Sine: return "sin";
    case Target::SineOfTSineT: return "tsint";
  }
  return "?";
}

Target parse_target(std::string_view name) {
  if (name == "t") return Target::Linear;
  if (name == "t2") return Target::Quadratic;
  if (name == "sin") return Target::Sine;
  if (name == "tsint") return Target::SineOfTSineT;
  throw ConfigError("target", "unknown target '" + std::string(name) +
                                  "' (expected t, t2, sin or tsint)");
}

std::string_view task_kind_name(TaskKind kind) noexcept {
  return kind == TaskKind::NumericFitness ? "numeric" : "timeseries";
}

TaskKind parse_task_kind(std::string_view name) {
  if (name == "numeric") return TaskKind::NumericFitness;
  if (name == "timeseries") return TaskKind::TimeSeries;
  throw ConfigError("task", "unknown task '" + std::string(name) +
                                "' (expected numeric or timeseries)");
}

double target_value(Target target, std::uint64_t t, double time_scale) {
  const double u = static_cast<double>(t) / time_scale;
  switch (target) {
    case Target::Linear: return u;
    case Target::Quadratic: return u * u;
    case Target::Sine: return std::sin(u);
    case Target::SineOfTSineT: return std::sin(u * std::sin(u));
  }
  throw ConfigError("target", "unknown target");
}

double evaluate_fitness(const FitnessTask& task, std::span<const double> params,
                        std::uint64_t t) {
  if (params.empty()) throw ContractViolation("evaluate_fitness: empty genome");
  if (task.kind == TaskKind::NumericFitness) return params[0];
  return -std::abs(target_value(task.target, t, task.time_scale) - params[0]);
}

void evaluate_population(const FitnessTask& task, const Population& pop,
                         std::span<double> out) {
  if (out.size() != pop.size()) {
    throw ContractViolation("evaluate_population: output size mismatch");
  }
  if (task.kind == TaskKind::NumericFitness) {
    for (std::size_t s = 0; s < pop.size(); ++s) {
      out[s] = pop.members[s].params[0];
    }
    return;
  }
  const double target = target_value(task.target, pop.generation, task.time_scale);
  for (std::size_t s = 0; s < pop.size(); ++s) {
    out[s] = -std::abs(target - pop.members[s].params[0]);
  }
}

}  // namespace ordevo
