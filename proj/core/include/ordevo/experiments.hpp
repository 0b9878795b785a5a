// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordevo/evolution.hpp"
#include "ordevo/fitness.hpp"

namespace ordevo {

/// One genome layout in an experiment: meta-order n plus the mutation rule
/// for its top entry.
struct OrderSpec {
  std::size_t order = 0;
  bool self_referential = false;

  /// "0", "1", ... for the standard rule; "sr1" for self-referential order 1.
  std::string label() const;
  static OrderSpec parse(std::string_view label);

  friend auto operator<=>(const OrderSpec&, const OrderSpec&) = default;
};

/// Which member's x^0 counts as the population's forecast of f(t/scale).
enum class ErrorMetric {
  /// The fittest member at generation t, chosen with f(t/scale) known.
  Fittest,
  /// Mean x^0 over the population at generation t, before selection.
  PopulationMean,
};

std::string_view error_metric_name(ErrorMetric metric) noexcept;
ErrorMetric parse_error_metric(std::string_view name);

/// Everything that determines one run bit for bit.
struct RunConfig {
  FitnessTask task;
  OrderSpec order;
  SelectionConfig selection;
  MutationConfig mutation;
  std::uint64_t generations = 1;
  std::uint64_t seed = 0;
  ErrorMetric error_metric = ErrorMetric::Fittest;

  void validate() const;
};

/// Per-generation monitors of one run. Index j holds generation j+1, so a
/// complete record has `generations` entries.
struct RunRecord {
  RunConfig config;
  std::vector<double> best_fitness;
  /// |f(t/scale) - forecast| under the config's ErrorMetric; empty for
  /// NumericFitness.
  std::vector<double> pred_error;
  /// First generation whose mutation produced a non-finite entry.
  std::optional<std::uint64_t> truncated_at;

  std::size_t length() const noexcept { return best_fitness.size(); }
};

/// Runs `generations` steps from the all-zero population. Deterministic in
/// the config. Divergence to non-finite values truncates the record rather
/// than throwing.
RunRecord run_evolution(const RunConfig& cfg);

/// Mean of pred_error over generations 1..T; +inf for truncated runs.
double mean_prediction_error(const RunRecord& record);

struct ExperimentSpec {
  FitnessTask task;
  std::vector<OrderSpec> orders;
  SelectionConfig selection;
  /// beta is ignored in favour of beta_grid; self_referential comes from
  /// each OrderSpec.
  MutationConfig mutation;
  std::vector<double> beta_grid{1.0};
  std::uint64_t generations = 1000;
  std::uint32_t seeds = 1;
  std::uint64_t base_seed = 0;
  ErrorMetric error_metric = ErrorMetric::Fittest;

  void validate() const;

  /// Seed index j runs with noise key base_seed + j, shared by every
  /// (order, beta, k) cell.
  std::uint64_t run_seed(std::uint32_t index) const noexcept {
    return base_seed + index;
  }

  /// One RunConfig per (order, beta, seed) in canonical order: orders
  /// ascending, betas descending, seeds ascending.
  std::vector<RunConfig> expand() const;
};

/// Named presets: figure1-full, figure1-desk, table1-full, table1-desk.
ExperimentSpec make_preset(std::string_view name);
std::vector<std::string_view> preset_names();

/// Noise-scale grid of the forecasting presets.
inline const std::vector<double>& table1_beta_grid() {
  static const std::vector<double> grid{1.0, 0.5, 0.1, 0.05, 0.01};
  return grid;
}

/// Runs every config on a worker pool; the output order matches `configs`.
std::vector<RunRecord> run_all(std::span<const RunConfig> configs,
                               unsigned threads);

// ---------------------------------------------------------------------------
// Aggregation

/// Identifies one curve: all config fields except the seed.
struct CurveKey {
  TaskKind kind = TaskKind::NumericFitness;
  Target target = Target::Linear;
  OrderSpec order;
  double beta = 1.0;
  std::size_t k = 1;
  std::size_t population_size = 1;

  static CurveKey of(const RunConfig& cfg);
  friend auto operator<=>(const CurveKey&, const CurveKey&) = default;
};

/// Seed-averaged curve over the generations every seed reached.
struct AggregateCurve {
  CurveKey key;
  std::vector<std::uint64_t> seeds;
  std::vector<double> mean_best;
  std::vector<double> sem_best;
  std::vector<double> mean_error;
  std::vector<double> sem_error;
  /// Earliest truncation among the seeds, if any diverged.
  std::optional<std::uint64_t> truncated_at;

  std::size_t length() const noexcept { return mean_best.size(); }
};

/// Groups by CurveKey (sorted) and averages with seeds in ascending order,
/// so the result does not depend on the order of `records`.
std::vector<AggregateCurve> aggregate_runs(std::span<const RunRecord> records);

// ---------------------------------------------------------------------------
// Growth order

/// Inclusive generation range.
struct GenerationWindow {
  std::uint64_t first = 1;
  std::uint64_t last = 1;
};

/// Last half of a run of `length` generations: [max(1, length/2), length].
GenerationWindow default_growth_window(std::uint64_t length);

struct GrowthFit {
  /// Slope of log(fitness) against log(t).
  double slope = 0.0;
  /// R^2 of log(fitness) against t; near 1 for exponential growth.
  double r2_loglin = 0.0;
  /// R^2 of the log-log fit.
  double r2_loglog = 0.0;
  GenerationWindow window;
  std::size_t points = 0;
};

/// `best_fitness[j]` is generation j+1. Only strictly positive values inside
/// the window enter the fits; fewer than 8 raises InsufficientDataError.
GrowthFit fit_growth_order(std::span<const double> best_fitness,
                           GenerationWindow window);

inline GrowthFit fit_growth_order(const RunRecord& record,
                                  GenerationWindow window) {
  return fit_growth_order(record.best_fitness, window);
}

// ---------------------------------------------------------------------------
// Growth-curve experiment

struct Figure1Curve {
  AggregateCurve curve;
  std::optional<GrowthFit> fit;
  /// Why `fit` is absent.
  std::string fit_error;
};

struct Figure1Result {
  std::vector<RunRecord> runs;
  std::vector<Figure1Curve> curves;
};

/// Every order of `spec` under every selection size in `k_values`
/// (top-k followed by top-1 by default), with a growth fit of each mean
/// curve over the last half of its finite generations.
Figure1Result run_figure1(const ExperimentSpec& spec,
                          std::vector<std::size_t> k_values = {},
                          unsigned threads = 1);

/// Comparison of the last common generation of two curves.
struct FinalComparison {
  double difference = 0.0;
  double combined_sem = 0.0;
  bool within(double multiple) const noexcept {
    return std::abs(difference) <= multiple * combined_sem;
  }
};

FinalComparison compare_final(const AggregateCurve& a, const AggregateCurve& b);

// ---------------------------------------------------------------------------
// Forecasting table

struct Table1Cell {
  Target target = Target::Linear;
  OrderSpec order;
  /// Parallel arrays over the beta grid, sorted by descending beta.
  std::vector<double> betas;
  std::vector<double> errors;
  std::vector<double> sems;
  double best_beta = 0.0;
  double best_error = 0.0;
  double best_sem = 0.0;
};

struct Table1Result {
  std::vector<RunRecord> runs;
  std::vector<Table1Cell> cells;

  const Table1Cell* find(Target target, std::size_t order) const;
};

/// For each (target, order) and each beta: mean over seeds of the per-run
/// average prediction error; the cell reports the beta with the smallest
/// error (ties go to the larger beta).
Table1Result run_table1(const ExperimentSpec& spec,
                        std::span<const Target> targets, unsigned threads = 1);

/// Cells from records that have already been run.
std::vector<Table1Cell> tabulate_forecasting(std::span<const RunRecord> runs);

}  // namespace ordevo
