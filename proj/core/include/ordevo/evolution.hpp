// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ordevo/errors.hpp"
#include "ordevo/noise.hpp"

namespace ordevo {

/// A genome of meta-order n holds n+1 entries; params[i] is the i-th order
/// meta-parameter and params[0] is the fitness-bearing value.
struct Genome {
  std::vector<double> params;

  Genome() = default;
  explicit Genome(std::vector<double> p) : params(std::move(p)) {}

  static Genome zeros(std::size_t meta_order) {
    return Genome(std::vector<double>(meta_order + 1, 0.0));
  }

  std::size_t meta_order() const noexcept { return params.size() - 1; }
  std::size_t size() const noexcept { return params.size(); }

  friend bool operator==(const Genome&, const Genome&) = default;
};

struct MutationConfig {
  double beta = 1.0;
  bool self_referential = false;
  /// true: N(0, beta) is read as variance beta, so the noise scale is
  /// sqrt(beta). false: beta is the standard deviation.
  bool beta_is_variance = true;

  double noise_scale() const noexcept {
    return beta_is_variance ? std::sqrt(beta) : beta;
  }

  /// Throws ValidationError unless beta is finite and positive.
  void validate() const;
};

struct SelectionConfig {
  std::size_t k = 1;
  std::size_t population_size = 1;

  /// Throws ValidationError unless 1 <= k <= N and N is divisible by k.
  void validate() const;

  std::size_t offspring_per_survivor() const noexcept {
    return population_size / k;
  }
};

using LineageTag = std::uint64_t;

struct Population {
  std::vector<Genome> members;
  /// One tag per member, or empty when lineage is not tracked.
  std::vector<LineageTag> lineage;
  std::uint64_t generation = 0;

  std::size_t size() const noexcept { return members.size(); }
  std::size_t meta_order() const noexcept {
    return members.empty() ? 0 : members.front().meta_order();
  }
  bool tracks_lineage() const noexcept { return !lineage.empty(); }

  friend bool operator==(const Population&, const Population&) = default;
};

/// One cascade step. `noise` holds raw standard-normal draws; the
/// beta scale is applied here.
///
///   out[i] = g[i] + g[i+1] + s*noise[i]            0 <= i < n
///   out[n] = g[n] + s*noise[n]                     standard
///   out[n] = g[n] + g[n] + s*noise[n]              self-referential
///
/// Throws ContractViolation on a length mismatch and OverflowError if any
/// output entry is not finite.
Genome mutate(const Genome& g, std::span<const double> noise,
              const MutationConfig& cfg);

/// Non-throwing kernel behind mutate(). Writes into `out` (resized as
/// needed) and returns false if any entry is not finite.
bool mutate_into(std::span<const double> in, std::span<const double> noise,
                 const MutationConfig& cfg, std::span<double> out) noexcept;

/// Indices of the k largest fitness values, best first; equal fitnesses are
/// ordered by ascending index.
std::vector<std::size_t> select_top_k(std::span<const double> fitnesses,
                                      std::size_t k);

/// Population overload; checks that one fitness is supplied per member.
std::vector<std::size_t> select_top_k(const Population& pop,
                                      std::span<const double> fitnesses,
                                      std::size_t k);

/// All-zero genomes of length n+1, generation 0, lineage tag = slot index.
Population init_population(std::size_t meta_order, const SelectionConfig& sel);

/// Parent index for offspring slot s when `survivors` are cloned N/k times
/// each: survivors[floor(s*k/N)].
inline std::size_t parent_of_slot(std::span<const std::size_t> survivors,
                                  std::size_t slot,
                                  std::size_t population_size) noexcept {
  return survivors[slot * survivors.size() / population_size];
}

namespace detail {
void check_step_inputs(const Population& pop, std::span<const double> fitnesses,
                       const SelectionConfig& sel);
void prepare_output(const Population& pop, Population& out);
}  // namespace detail

/// evaluate -> select -> replicate -> mutate, writing generation t+1 into
/// `out` and reusing its storage. `out` must not alias `pop`.
///
/// Offspring slot s descends from survivor floor(s*k/N) and is mutated with
/// noise from address (t+1, s, i). Every offspring is mutated; lineage tags
/// are inherited unchanged.
template <NoiseSource Noise>
void step_generation_into(const Population& pop,
                          std::span<const double> fitnesses,
                          const SelectionConfig& sel, const MutationConfig& mut,
                          const Noise& noise, Population& out) {
  detail::check_step_inputs(pop, fitnesses, sel);
  const auto survivors = select_top_k(fitnesses, sel.k);
  detail::prepare_output(pop, out);

  const std::size_t n_slots = sel.population_size;
  const std::uint64_t next = pop.generation + 1;
  std::vector<double> draws(pop.members.front().size());
  for (std::size_t s = 0; s < n_slots; ++s) {
    const std::size_t parent = parent_of_slot(survivors, s, n_slots);
    noise.fill(next, s, draws);
    if (!mutate_into(pop.members[parent].params, draws, mut,
                     out.members[s].params)) {
      throw OverflowError(next, s);
    }
    if (pop.tracks_lineage()) out.lineage[s] = pop.lineage[parent];
  }
  out.generation = next;
}

template <NoiseSource Noise>
Population step_generation(const Population& pop,
                           std::span<const double> fitnesses,
                           const SelectionConfig& sel,
                           const MutationConfig& mut, const Noise& noise) {
  Population out;
  step_generation_into(pop, fitnesses, sel, mut, noise, out);
  return out;
}

}  // namespace ordevo
