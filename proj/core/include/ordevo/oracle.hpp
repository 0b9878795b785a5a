// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ordevo/evolution.hpp"
#include "ordevo/fitness.hpp"
#include "ordevo/noise.hpp"

namespace ordevo {

/// The perturbed arm adds `delta` to params[meta_order] of `focal_slot`.
struct PerturbationSpec {
  std::size_t focal_slot = 0;
  double delta = 1.0;
  std::size_t meta_order = 1;

  void validate(const SelectionConfig& sel) const;
};

enum class InitMode {
  /// Every entry of every genome i.i.d. standard normal, drawn from the
  /// trial stream at generation 0.
  Jitter,
  /// All-zero genomes; ties at the first selection resolve by slot index.
  Zero,
};

/// Child counts of the focal member after the selection into generation n+1,
/// in the unperturbed (base) and perturbed arms driven by identical noise.
struct CoupledTrialResult {
  std::size_t children_base = 0;
  std::size_t children_perturbed = 0;
  std::uint64_t trial_seed = 0;
};

struct OracleReport {
  std::uint64_t trials = 0;
  double mean_diff = 0.0;
  double sem_diff = 0.0;
  double mean_children_base = 0.0;
  double mean_children_perturbed = 0.0;
  std::uint64_t pathwise_violations = 0;
  std::uint64_t witness_count = 0;
  bool witness_observed = false;
  /// Trials whose two counts differed at all.
  std::uint64_t unequal_trials = 0;
};

/// Both arms of one coupled trial, generation by generation. Populations
/// cover generations 0..n+1, fitness vectors generations 0..n (the ones
/// that feed the n+1 selections).
struct CoupledTrace {
  std::vector<Population> base;
  std::vector<Population> perturbed;
  std::vector<std::vector<double>> base_fitness;
  std::vector<std::vector<double>> perturbed_fitness;
  CoupledTrialResult result;
};

namespace detail {

void check_coupled_inputs(const SelectionConfig& sel, const MutationConfig& mut,
                          const PerturbationSpec& pert);

std::size_t count_children(const Population& pop, LineageTag tag) noexcept;

template <NoiseSource Noise>
Population coupled_initial(const SelectionConfig& sel,
                           const PerturbationSpec& pert, InitMode init,
                           const Noise& noise) {
  Population pop = init_population(pert.meta_order, sel);
  if (init == InitMode::Jitter) {
    for (std::size_t s = 0; s < pop.size(); ++s) {
      noise.fill(0, s, pop.members[s].params);
    }
  }
  return pop;
}

}  // namespace detail

/// Runs both arms for exactly n+1 selection events under the same
/// slot-addressed noise and records every intermediate population.
template <NoiseSource Noise>
CoupledTrace trace_coupled_trial(const SelectionConfig& sel,
                                 const MutationConfig& mut,
                                 const PerturbationSpec& pert,
                                 const Noise& noise, InitMode init,
                                 std::uint64_t trial_seed = 0) {
  detail::check_coupled_inputs(sel, mut, pert);
  const FitnessTask task = FitnessTask::numeric();

  CoupledTrace trace;
  Population base = detail::coupled_initial(sel, pert, init, noise);
  Population perturbed = base;
  perturbed.members[pert.focal_slot].params[pert.meta_order] += pert.delta;

  std::vector<double> fb(sel.population_size), fp(sel.population_size);
  for (std::size_t event = 0; event <= pert.meta_order; ++event) {
    evaluate_population(task, base, fb);
    evaluate_population(task, perturbed, fp);
    trace.base.push_back(base);
    trace.perturbed.push_back(perturbed);
    trace.base_fitness.push_back(fb);
    trace.perturbed_fitness.push_back(fp);
    base = step_generation(base, fb, sel, mut, noise);
    perturbed = step_generation(perturbed, fp, sel, mut, noise);
  }
  const auto tag = static_cast<LineageTag>(pert.focal_slot);
  trace.result = {detail::count_children(base, tag),
                  detail::count_children(perturbed, tag), trial_seed};
  trace.base.push_back(std::move(base));
  trace.perturbed.push_back(std::move(perturbed));
  return trace;
}

/// One coupled trial with noise keyed by `trial_seed`. The self-referential
/// rule is rejected with UnsupportedError.
CoupledTrialResult run_coupled_trial(const SelectionConfig& sel,
                                     const MutationConfig& mut,
                                     const PerturbationSpec& pert,
                                     std::uint64_t trial_seed,
                                     InitMode init = InitMode::Jitter);

/// Trials use seeds base_seed, base_seed+1, ..., base_seed+trials-1. The
/// report is independent of `threads`.
OracleReport estimate_child_expectation(const SelectionConfig& sel,
                                        const MutationConfig& mut,
                                        const PerturbationSpec& pert,
                                        std::uint64_t trials,
                                        std::uint64_t base_seed,
                                        unsigned threads = 1,
                                        InitMode init = InitMode::Jitter);

/// Aggregates already-computed trials (in the given order).
OracleReport summarize_trials(const std::vector<CoupledTrialResult>& results);

/// True iff no trial had fewer perturbed children than base children.
inline bool check_lemma2_pathwise(const OracleReport& report) noexcept {
  return report.pathwise_violations == 0;
}

/// Grid of coupled-trial configurations checked by `theorem-check`.
struct TheoremGrid {
  std::vector<std::size_t> meta_orders{1, 2, 3};
  std::vector<std::size_t> ks{1, 2, 4};
  std::vector<std::size_t> population_sizes{4, 8};
  std::uint64_t trials = 10000;
  double delta = 1.0;
  std::size_t focal_slot = 0;
  MutationConfig mutation;
  InitMode init = InitMode::Jitter;
  /// Minimum mean_diff / sem_diff for the strict-advantage check.
  double significance_sems = 5.0;
};

struct TheoremCheckEntry {
  std::size_t meta_order = 0;
  SelectionConfig selection;
  std::uint64_t base_seed = 0;
  OracleReport report;

  bool pathwise_holds = false;
  /// Top-1 with n >= 2: counts must agree in every trial.
  bool top1_applies = false;
  bool top1_holds = false;
  /// 1 < k < N: the perturbed member must gain children on average.
  bool strict_applies = false;
  bool strict_holds = false;
};

/// Runs every valid (n, k, N) combination of the grid, skipping k > N and
/// N not divisible by k. Configuration c (in n, k, N loop order) uses trial
/// seeds seed + c*trials, ..., seed + (c+1)*trials - 1.
std::vector<TheoremCheckEntry> run_theorem_checks(const TheoremGrid& grid,
                                                  std::uint64_t seed,
                                                  unsigned threads = 1);

}  // namespace ordevo
