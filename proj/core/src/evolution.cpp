// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "ordevo/evolution.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace ordevo {

namespace {

std::string overflow_message(std::optional<std::uint64_t> generation,
                             std::optional<std::uint64_t> slot) {
  std::string msg = "genome entry is not finite";
  if (generation) msg += " at generation " + std::to_string(*generation);
  if (slot) msg += (generation ? ", slot " : " at slot ") + std::to_string(*slot);
  return msg;
}

}  // namespace

OverflowError::OverflowError(std::optional<std::uint64_t> generation,
                             std::optional<std::uint64_t> slot)
    : Error(overflow_message(generation, slot)),
      generation_(generation),
      slot_(slot) {}

void MutationConfig::validate() const {
  if (!(std::isfinite(beta) && beta > 0.0)) {
    throw ValidationError("beta must be a finite positive number");
  }
}

void SelectionConfig::validate() const {
  if (population_size < 1) {
    throw ValidationError("population_size must be at least 1");
  }
  if (k < 1 || k > population_size) {
    throw ValidationError("k must satisfy 1 <= k <= population_size");
  }
  if (population_size % k != 0) {
    throw ValidationError("population_size must be divisible by k");
  }
}

bool mutate_into(std::span<const double> in, std::span<const double> noise,
                 const MutationConfig& cfg, std::span<double> out) noexcept {
  const double scale = cfg.noise_scale();
  const std::size_t n = in.size() - 1;
  bool finite = true;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = in[i] + in[i + 1] + scale * noise[i];
    finite &= std::isfinite(out[i]);
  }
  const double top = cfg.self_referential ? in[n] + in[n] : in[n];
  out[n] = top + scale * noise[n];
  finite &= std::isfinite(out[n]);
  return finite;
}

Genome mutate(const Genome& g, std::span<const double> noise,
              const MutationConfig& cfg) {
  if (g.params.empty()) {
    throw ContractViolation("mutate: genome has no entries");
  }
  if (noise.size() != g.params.size()) {
    throw ContractViolation("mutate: noise length " +
                            std::to_string(noise.size()) +
                            " does not match genome length " +
                            std::to_string(g.params.size()));
  }
  Genome out(std::vector<double>(g.params.size()));
  if (!mutate_into(g.params, noise, cfg, out.params)) {
    throw OverflowError(std::nullopt, std::nullopt);
  }
  return out;
}

std::vector<std::size_t> select_top_k(std::span<const double> fitnesses,
                                      std::size_t k) {
  if (k > fitnesses.size()) {
    throw ContractViolation("select_top_k: k = " + std::to_string(k) +
                            " exceeds population of " +
                            std::to_string(fitnesses.size()));
  }
  std::vector<std::size_t> idx(fitnesses.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto better = [&](std::size_t a, std::size_t b) {
    if (fitnesses[a] != fitnesses[b]) return fitnesses[a] > fitnesses[b];
    return a < b;
  };
  const auto kth = idx.begin() + static_cast<std::ptrdiff_t>(k);
  if (k < idx.size()) std::nth_element(idx.begin(), kth, idx.end(), better);
  std::sort(idx.begin(), kth, better);
  idx.resize(k);
  return idx;
}

std::vector<std::size_t> select_top_k(const Population& pop,
                                      std::span<const double> fitnesses,
                                      std::size_t k) {
  if (fitnesses.size() != pop.size()) {
    throw ContractViolation("select_top_k: expected one fitness per member");
  }
  return select_top_k(fitnesses, k);
}

Population init_population(std::size_t meta_order, const SelectionConfig& sel) {
  Population pop;
  pop.members.assign(sel.population_size, Genome::zeros(meta_order));
  pop.lineage.resize(sel.population_size);
  std::iota(pop.lineage.begin(), pop.lineage.end(), LineageTag{0});
  pop.generation = 0;
  return pop;
}

namespace detail {

void check_step_inputs(const Population& pop, std::span<const double> fitnesses,
                       const SelectionConfig& sel) {
  sel.validate();
  if (pop.size() != sel.population_size) {
    throw ContractViolation("step_generation: population has " +
                            std::to_string(pop.size()) + " members, expected " +
                            std::to_string(sel.population_size));
  }
  if (fitnesses.size() != pop.size()) {
    throw ContractViolation("step_generation: expected one fitness per member");
  }
  for (double f : fitnesses) {
    if (!std::isfinite(f)) {
      throw ContractViolation("step_generation: fitness values must be finite");
    }
  }
  const std::size_t len = pop.members.front().size();
  if (len == 0) {
    throw ContractViolation("step_generation: genomes have no entries");
  }
  for (const auto& g : pop.members) {
    if (g.size() != len) {
      throw ContractViolation("step_generation: members differ in meta-order");
    }
  }
  if (pop.tracks_lineage() && pop.lineage.size() != pop.size()) {
    throw ContractViolation("step_generation: lineage length mismatch");
  }
}

void prepare_output(const Population& pop, Population& out) {
  const std::size_t len = pop.members.front().size();
  out.members.resize(pop.size());
  for (auto& g : out.members) g.params.resize(len);
  if (pop.tracks_lineage()) {
    out.lineage.resize(pop.size());
  } else {
    out.lineage.clear();
  }
}

}  // namespace detail

}  // namespace ordevo
