// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "ordevo/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

#include "ordevo/noise.hpp"
#include "ordevo/parallel.hpp"
#include "ordevo/stats.hpp"

namespace ordevo {

std::string OrderSpec::label() const {
  return (self_referential ? "sr" : "") + std::to_string(order);
}

OrderSpec OrderSpec::parse(std::string_view label) {
  OrderSpec spec;
  std::string_view digits = label;
  if (digits.starts_with("sr")) {
    spec.self_referential = true;
    digits.remove_prefix(2);
    // bare "sr" means the minimal self-referential genome, order 1
    if (digits.empty()) {
      spec.order = 1;
      return spec;
    }
  }
  const auto* end = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(digits.data(), end, spec.order);
  if (digits.empty() || ec != std::errc{} || ptr != end) {
    throw ConfigError("orders", "invalid meta-order '" + std::string(label) + "'");
  }
  return spec;
}

std::string_view error_metric_name(ErrorMetric metric) noexcept {
  return metric == ErrorMetric::Fittest ? "fittest" : "mean";
}

ErrorMetric parse_error_metric(std::string_view name) {
  if (name == "fittest") return ErrorMetric::Fittest;
  if (name == "mean") return ErrorMetric::PopulationMean;
  throw ConfigError("error-metric", "unknown error metric '" + std::string(name) +
                                        "' (expected fittest or mean)");
}

namespace {

double population_mean_x0(const Population& pop) {
  double sum = 0.0;
  for (const auto& g : pop.members) sum += g.params[0];
  return sum / static_cast<double>(pop.size());
}

}  // namespace

void RunConfig::validate() const {
  task.validate();
  selection.validate();
  mutation.validate();
  if (generations < 1) throw ValidationError("generations must be at least 1");
  if (mutation.self_referential != order.self_referential) {
    throw ContractViolation("RunConfig: mutation rule does not match the order spec");
  }
}

RunRecord run_evolution(const RunConfig& cfg) {
  cfg.validate();
  RunRecord record;
  record.config = cfg;
  record.best_fitness.reserve(cfg.generations);
  const bool forecasting = cfg.task.kind == TaskKind::TimeSeries;
  if (forecasting) record.pred_error.reserve(cfg.generations);

  const NoiseStream noise(cfg.seed);
  Population current = init_population(cfg.order.order, cfg.selection);
  // Lineage is not needed for monitoring; skipping it saves a copy per slot.
  current.lineage.clear();
  Population next;
  std::vector<double> fitness(cfg.selection.population_size);
  evaluate_population(cfg.task, current, fitness);

  for (std::uint64_t t = 1; t <= cfg.generations; ++t) {
    try {
      step_generation_into(current, fitness, cfg.selection, cfg.mutation, noise,
                           next);
    } catch (const OverflowError& e) {
      record.truncated_at = e.generation().value_or(t);
      break;
    }
    std::swap(current, next);
    evaluate_population(cfg.task, current, fitness);
    const double best = *std::max_element(fitness.begin(), fitness.end());
    if (!std::isfinite(best)) {
      record.truncated_at = t;
      break;
    }
    record.best_fitness.push_back(best);
    if (forecasting) {
      if (cfg.error_metric == ErrorMetric::Fittest) {
        record.pred_error.push_back(-best);
      } else {
        const double target =
            target_value(cfg.task.target, current.generation, cfg.task.time_scale);
        record.pred_error.push_back(std::abs(target - population_mean_x0(current)));
      }
    }
  }
  return record;
}

double mean_prediction_error(const RunRecord& record) {
  if (record.truncated_at || record.pred_error.empty()) {
    return std::numeric_limits<double>::infinity();
  }
  return stats::mean(record.pred_error);
}

void ExperimentSpec::validate() const {
  task.validate();
  selection.validate();
  if (orders.empty()) throw ValidationError("orders must not be empty");
  if (beta_grid.empty()) throw ValidationError("beta grid must not be empty");
  for (double b : beta_grid) {
    MutationConfig m = mutation;
    m.beta = b;
    m.validate();
  }
  if (generations < 1) throw ValidationError("generations must be at least 1");
  if (seeds < 1) throw ValidationError("seeds must be at least 1");
}

std::vector<RunConfig> ExperimentSpec::expand() const {
  validate();
  std::vector<OrderSpec> sorted_orders = orders;
  std::sort(sorted_orders.begin(), sorted_orders.end());
  sorted_orders.erase(std::unique(sorted_orders.begin(), sorted_orders.end()),
                      sorted_orders.end());
  std::vector<double> betas = beta_grid;
  std::sort(betas.begin(), betas.end(), std::greater<>());
  betas.erase(std::unique(betas.begin(), betas.end()), betas.end());

  std::vector<RunConfig> out;
  out.reserve(sorted_orders.size() * betas.size() * seeds);
  for (const auto& order : sorted_orders) {
    for (double beta : betas) {
      for (std::uint32_t j = 0; j < seeds; ++j) {
        RunConfig cfg;
        cfg.task = task;
        cfg.order = order;
        cfg.selection = selection;
        cfg.mutation = mutation;
        cfg.mutation.beta = beta;
        cfg.mutation.self_referential = order.self_referential;
        cfg.generations = generations;
        cfg.seed = run_seed(j);
        cfg.error_metric = error_metric;
        out.push_back(cfg);
      }
    }
  }
  return out;
}

ExperimentSpec make_preset(std::string_view name) {
  ExperimentSpec spec;
  spec.base_seed = 0;
  if (name == "figure1-full" || name == "figure1-desk") {
    spec.task = FitnessTask::numeric();
    spec.orders = {{0, false}, {1, false}, {2, false}, {3, false}, {1, true}};
    spec.selection = {2, 2048};
    spec.beta_grid = {1.0};
    spec.generations = 1000;
    spec.seeds = name == "figure1-full" ? 1024 : 32;
    return spec;
  }
  if (name == "table1-full" || name == "table1-desk") {
    const bool full = name == "table1-full";
    spec.task = FitnessTask::time_series(Target::Linear);
    spec.orders = {{0, false}, {1, false}, {2, false}, {3, false}};
    spec.selection = full ? SelectionConfig{1024, 16384} : SelectionConfig{256, 4096};
    spec.beta_grid = table1_beta_grid();
    spec.generations = full ? 4096 : 2048;
    spec.seeds = full ? 64 : 8;
    return spec;
  }
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

std::vector<std::string_view> preset_names() {
  return {"figure1-full", "figure1-desk", "table1-full", "table1-desk"};
}

std::vector<RunRecord> run_all(std::span<const RunConfig> configs,
                               unsigned threads) {
  std::vector<RunRecord> records(configs.size());
  parallel_for(configs.size(), threads,
               [&](std::size_t i) { records[i] = run_evolution(configs[i]); });
  return records;
}

CurveKey CurveKey::of(const RunConfig& cfg) {
  CurveKey key;
  key.kind = cfg.task.kind;
  key.target = cfg.task.kind == TaskKind::TimeSeries ? cfg.task.target : Target::Linear;
  key.order = cfg.order;
  key.beta = cfg.mutation.beta;
  key.k = cfg.selection.k;
  key.population_size = cfg.selection.population_size;
  return key;
}

std::vector<AggregateCurve> aggregate_runs(std::span<const RunRecord> records) {
  std::map<CurveKey, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[CurveKey::of(r.config)].push_back(&r);

  std::vector<AggregateCurve> curves;
  curves.reserve(groups.size());
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end(),
              [](const RunRecord* a, const RunRecord* b) {
                return a->config.seed < b->config.seed;
              });
    AggregateCurve curve;
    curve.key = key;
    std::size_t length = std::numeric_limits<std::size_t>::max();
    for (const auto* r : members) {
      curve.seeds.push_back(r->config.seed);
      length = std::min(length, r->length());
      if (r->truncated_at) {
        curve.truncated_at = std::min(curve.truncated_at.value_or(*r->truncated_at),
                                      *r->truncated_at);
      }
    }
    const bool forecasting = key.kind == TaskKind::TimeSeries;
    std::vector<double> column(members.size());
    for (std::size_t j = 0; j < length; ++j) {
      for (std::size_t m = 0; m < members.size(); ++m) {
        column[m] = members[m]->best_fitness[j];
      }
      curve.mean_best.push_back(stats::mean(column));
      curve.sem_best.push_back(stats::sem(column));
      if (forecasting) {
        for (std::size_t m = 0; m < members.size(); ++m) {
          column[m] = members[m]->pred_error[j];
        }
        curve.mean_error.push_back(stats::mean(column));
        curve.sem_error.push_back(stats::sem(column));
      }
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

GenerationWindow default_growth_window(std::uint64_t length) {
  return {std::max<std::uint64_t>(1, length / 2), std::max<std::uint64_t>(1, length)};
}

GrowthFit fit_growth_order(std::span<const double> best_fitness,
                           GenerationWindow window) {
  if (window.first < 1 || window.last < window.first) {
    throw ContractViolation("fit_growth_order: window must satisfy 1 <= first <= last");
  }
  std::vector<double> log_t, t_lin, log_y;
  const std::uint64_t last = std::min<std::uint64_t>(window.last, best_fitness.size());
  for (std::uint64_t t = window.first; t <= last; ++t) {
    const double y = best_fitness[t - 1];
    if (!(y > 0.0) || !std::isfinite(y)) continue;
    log_t.push_back(std::log(static_cast<double>(t)));
    t_lin.push_back(static_cast<double>(t));
    log_y.push_back(std::log(y));
  }
  if (log_y.size() < 8) {
    throw InsufficientDataError("fit_growth_order: only " + std::to_string(log_y.size()) +
                                " positive points in window (need 8)");
  }
  const auto loglog = stats::least_squares(log_t, log_y);
  const auto loglin = stats::least_squares(t_lin, log_y);
  GrowthFit fit;
  fit.slope = loglog.slope;
  fit.r2_loglog = loglog.r2;
  fit.r2_loglin = loglin.r2;
  fit.window = window;
  fit.points = log_y.size();
  return fit;
}

Figure1Result run_figure1(const ExperimentSpec& spec,
                          std::vector<std::size_t> k_values, unsigned threads) {
  if (spec.task.kind != TaskKind::NumericFitness) {
    throw ValidationError("figure1 requires the numeric fitness task");
  }
  if (k_values.empty()) {
    k_values.push_back(spec.selection.k);
    if (spec.selection.k != 1) k_values.push_back(1);
  }
  std::vector<RunConfig> configs;
  for (std::size_t k : k_values) {
    ExperimentSpec variant = spec;
    variant.selection.k = k;
    auto expanded = variant.expand();
    configs.insert(configs.end(), expanded.begin(), expanded.end());
  }

  Figure1Result result;
  result.runs = run_all(configs, threads);
  for (auto& curve : aggregate_runs(result.runs)) {
    Figure1Curve entry;
    const auto window = default_growth_window(curve.length());
    try {
      entry.fit = fit_growth_order(curve.mean_best, window);
    } catch (const Error& e) {
      entry.fit_error = e.what();
    }
    entry.curve = std::move(curve);
    result.curves.push_back(std::move(entry));
  }
  return result;
}

FinalComparison compare_final(const AggregateCurve& a, const AggregateCurve& b) {
  const std::size_t len = std::min(a.length(), b.length());
  if (len == 0) throw InsufficientDataError("compare_final: empty curve");
  const std::size_t j = len - 1;
  return {a.mean_best[j] - b.mean_best[j],
          std::sqrt(a.sem_best[j] * a.sem_best[j] + b.sem_best[j] * b.sem_best[j])};
}

const Table1Cell* Table1Result::find(Target target, std::size_t order) const {
  for (const auto& c : cells) {
    if (c.target == target && c.order.order == order && !c.order.self_referential) {
      return &c;
    }
  }
  return nullptr;
}

std::vector<Table1Cell> tabulate_forecasting(std::span<const RunRecord> runs) {
  // (target, order) -> beta -> seed -> mean error
  std::map<std::pair<Target, OrderSpec>,
           std::map<double, std::map<std::uint64_t, double>, std::greater<>>>
      grid;
  for (const auto& r : runs) {
    if (r.config.task.kind != TaskKind::TimeSeries) continue;
    grid[{r.config.task.target, r.config.order}][r.config.mutation.beta]
        [r.config.seed] = mean_prediction_error(r);
  }

  std::vector<Table1Cell> cells;
  for (const auto& [cell_key, by_beta] : grid) {
    Table1Cell cell;
    cell.target = cell_key.first;
    cell.order = cell_key.second;
    cell.best_error = std::numeric_limits<double>::infinity();
    for (const auto& [beta, by_seed] : by_beta) {
      std::vector<double> errs;
      for (const auto& [seed, err] : by_seed) errs.push_back(err);
      const double m = stats::mean(errs);
      const double s = std::isfinite(m) ? stats::sem(errs) : 0.0;
      cell.betas.push_back(beta);
      cell.errors.push_back(m);
      cell.sems.push_back(s);
      if (m < cell.best_error || cell.betas.size() == 1) {
        cell.best_error = m;
        cell.best_beta = beta;
        cell.best_sem = s;
      }
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

Table1Result run_table1(const ExperimentSpec& spec, std::span<const Target> targets,
                        unsigned threads) {
  if (targets.empty()) throw ValidationError("table1 needs at least one target");
  std::vector<RunConfig> configs;
  for (Target target : targets) {
    ExperimentSpec variant = spec;
    variant.task = FitnessTask::time_series(target, spec.task.time_scale);
    auto expanded = variant.expand();
    configs.insert(configs.end(), expanded.begin(), expanded.end());
  }
  Table1Result result;
  result.runs = run_all(configs, threads);
  result.cells = tabulate_forecasting(result.runs);
  return result;
}

}  // namespace ordevo
