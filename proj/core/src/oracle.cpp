// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "ordevo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordevo/parallel.hpp"

namespace ordevo {

void PerturbationSpec::validate(const SelectionConfig& sel) const {
  if (!(std::isfinite(delta) && delta > 0.0)) {
    throw ValidationError("delta must be a finite positive number");
  }
  if (focal_slot >= sel.population_size) {
    throw ValidationError("focal_slot " + std::to_string(focal_slot) +
                          " is outside a population of " +
                          std::to_string(sel.population_size));
  }
}

namespace detail {

void check_coupled_inputs(const SelectionConfig& sel, const MutationConfig& mut,
                          const PerturbationSpec& pert) {
  if (mut.self_referential) {
    throw UnsupportedError(
        "coupled trials are defined for the standard mutation rule only");
  }
  sel.validate();
  mut.validate();
  pert.validate(sel);
}

std::size_t count_children(const Population& pop, LineageTag tag) noexcept {
  return static_cast<std::size_t>(
      std::count(pop.lineage.begin(), pop.lineage.end(), tag));
}

}  // namespace detail

namespace {

// Lean version of trace_coupled_trial: same operations, no history kept.
CoupledTrialResult coupled_counts(const SelectionConfig& sel,
                                  const MutationConfig& mut,
                                  const PerturbationSpec& pert,
                                  std::uint64_t trial_seed, InitMode init) {
  const NoiseStream noise(trial_seed);
  const FitnessTask task = FitnessTask::numeric();
  Population base = detail::coupled_initial(sel, pert, init, noise);
  Population perturbed = base;
  perturbed.members[pert.focal_slot].params[pert.meta_order] += pert.delta;

  Population scratch_b, scratch_p;
  std::vector<double> fb(sel.population_size), fp(sel.population_size);
  for (std::size_t event = 0; event <= pert.meta_order; ++event) {
    evaluate_population(task, base, fb);
    evaluate_population(task, perturbed, fp);
    step_generation_into(base, fb, sel, mut, noise, scratch_b);
    step_generation_into(perturbed, fp, sel, mut, noise, scratch_p);
    std::swap(base, scratch_b);
    std::swap(perturbed, scratch_p);
  }
  const auto tag = static_cast<LineageTag>(pert.focal_slot);
  return {detail::count_children(base, tag),
          detail::count_children(perturbed, tag), trial_seed};
}

}  // namespace

CoupledTrialResult run_coupled_trial(const SelectionConfig& sel,
                                     const MutationConfig& mut,
                                     const PerturbationSpec& pert,
                                     std::uint64_t trial_seed, InitMode init) {
  detail::check_coupled_inputs(sel, mut, pert);
  return coupled_counts(sel, mut, pert, trial_seed, init);
}

OracleReport summarize_trials(const std::vector<CoupledTrialResult>& results) {
  OracleReport report;
  report.trials = results.size();
  if (results.empty()) return report;

  double sum_diff = 0.0, sum_base = 0.0, sum_pert = 0.0;
  for (const auto& r : results) {
    const double diff = static_cast<double>(r.children_perturbed) -
                        static_cast<double>(r.children_base);
    sum_diff += diff;
    sum_base += static_cast<double>(r.children_base);
    sum_pert += static_cast<double>(r.children_perturbed);
    if (r.children_perturbed < r.children_base) ++report.pathwise_violations;
    if (r.children_perturbed != r.children_base) ++report.unequal_trials;
    if (r.children_base == 0 && r.children_perturbed >= 1) ++report.witness_count;
  }
  const double n = static_cast<double>(results.size());
  report.mean_diff = sum_diff / n;
  report.mean_children_base = sum_base / n;
  report.mean_children_perturbed = sum_pert / n;
  report.witness_observed = report.witness_count > 0;

  if (results.size() > 1) {
    double ss = 0.0;
    for (const auto& r : results) {
      const double diff = static_cast<double>(r.children_perturbed) -
                          static_cast<double>(r.children_base);
      ss += (diff - report.mean_diff) * (diff - report.mean_diff);
    }
    report.sem_diff = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return report;
}

OracleReport estimate_child_expectation(const SelectionConfig& sel,
                                        const MutationConfig& mut,
                                        const PerturbationSpec& pert,
                                        std::uint64_t trials,
                                        std::uint64_t base_seed,
                                        unsigned threads, InitMode init) {
  if (trials < 1) throw ContractViolation("estimate_child_expectation: trials must be >= 1");
  detail::check_coupled_inputs(sel, mut, pert);

  std::vector<CoupledTrialResult> results(trials);
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t end = std::min<std::size_t>(trials, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      results[i] = coupled_counts(sel, mut, pert, base_seed + i, init);
    }
  });
  return summarize_trials(results);
}

std::vector<TheoremCheckEntry> run_theorem_checks(const TheoremGrid& grid,
                                                  std::uint64_t seed,
                                                  unsigned threads) {
  std::vector<TheoremCheckEntry> entries;
  std::uint64_t config_index = 0;
  for (std::size_t n : grid.meta_orders) {
    for (std::size_t k : grid.ks) {
      for (std::size_t pop : grid.population_sizes) {
        if (k < 1 || k > pop || pop % k != 0) continue;
        TheoremCheckEntry e;
        e.meta_order = n;
        e.selection = {k, pop};
        e.base_seed = seed + config_index * grid.trials;
        ++config_index;
        const PerturbationSpec pert{grid.focal_slot, grid.delta, n};
        e.report = estimate_child_expectation(e.selection, grid.mutation, pert,
                                              grid.trials, e.base_seed, threads,
                                              grid.init);
        e.pathwise_holds = check_lemma2_pathwise(e.report);
        e.top1_applies = k == 1 && n >= 2;
        e.top1_holds = e.report.unequal_trials == 0;
        e.strict_applies = k > 1 && k < pop;
        e.strict_holds =
            e.report.mean_diff > 0.0 &&
            e.report.mean_diff > grid.significance_sems * e.report.sem_diff &&
            e.report.witness_observed;
        entries.push_back(e);
      }
    }
  }
  return entries;
}

}  // namespace ordevo
