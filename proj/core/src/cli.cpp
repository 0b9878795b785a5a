// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "ordevo/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>
#include "ordevo/results_io.hpp"

namespace ordevo::cli {

using nlohmann::json;

std::string engine_version() { return "ordevo " ORDEVO_VERSION_STRING; }

namespace {

json key_json(const CurveKey& key) {
  json j = {{"task", task_kind_name(key.kind)},
            {"order", key.order.order},
            {"self_referential", key.order.self_referential},
            {"beta", key.beta},
            {"k", key.k},
            {"population_size", key.population_size}};
  if (key.kind == TaskKind::TimeSeries) j["target"] = target_name(key.target);
  return j;
}

json fit_json(const GrowthFit& fit) {
  return {{"slope", fit.slope},
          {"r2_loglin", fit.r2_loglin},
          {"r2_loglog", fit.r2_loglog},
          {"window", {fit.window.first, fit.window.last}},
          {"points", fit.points}};
}

json curve_summary(const AggregateCurve& c) {
  json j = key_json(c.key);
  j["seeds"] = c.seeds.size();
  j["generations"] = c.length();
  if (c.length() > 0) {
    j["final_mean_best_fitness"] = c.mean_best.back();
    j["final_sem_best_fitness"] = c.sem_best.back();
  }
  if (c.truncated_at) j["truncated_at"] = *c.truncated_at;
  return j;
}

json cells_json(std::span<const Table1Cell> cells) {
  json arr = json::array();
  for (const auto& c : cells) {
    json errors = json::object();
    for (std::size_t b = 0; b < c.betas.size(); ++b) {
      errors[io::format_double(c.betas[b])] = c.errors[b];
    }
    arr.push_back({{"target", target_name(c.target)},
                   {"order", c.order.label()},
                   {"best_beta", c.best_beta},
                   {"best_error", c.best_error},
                   {"best_sem", c.best_sem},
                   {"error_by_beta", errors}});
  }
  return arr;
}

json best_orders_json(std::span<const Table1Cell> cells) {
  json best = json::object();
  for (const auto& c : cells) {
    const std::string t(target_name(c.target));
    if (!best.contains(t) || c.best_error < best[t]["error"].get<double>()) {
      best[t] = {{"order", c.order.label()}, {"error", c.best_error}};
    }
  }
  return best;
}

std::vector<RunConfig> simulate_configs(const CliConfig& cfg) {
  const auto& spec = cfg.experiment;
  if (spec.task.kind == TaskKind::NumericFitness) return spec.expand();
  std::vector<RunConfig> configs;
  for (Target t : cfg.targets) {
    ExperimentSpec variant = spec;
    variant.task.target = t;
    auto e = variant.expand();
    configs.insert(configs.end(), e.begin(), e.end());
  }
  return configs;
}

void run_fit(const CliConfig& cfg, json& report, std::ostream& log) {
  std::ifstream in(cfg.fit.input);
  if (!in) throw IoError("cannot read " + cfg.fit.input);
  const auto records = io::read_runs_csv(in);
  if (records.empty()) throw IoError(cfg.fit.input + " holds no runs");

  std::ostringstream csv;
  csv << "task,target,order,self_ref,beta,k,pop,window_first,window_last,points,"
         "slope,r2_loglin,r2_loglog,error\n";
  json fits = json::array();
  for (const auto& curve : aggregate_runs(records)) {
    GenerationWindow window = default_growth_window(curve.length());
    if (cfg.fit.window_first) window.first = *cfg.fit.window_first;
    if (cfg.fit.window_last) window.last = *cfg.fit.window_last;
    json entry = key_json(curve.key);
    const auto& k = curve.key;
    csv << task_kind_name(k.kind) << ','
        << (k.kind == TaskKind::TimeSeries ? std::string(target_name(k.target)) : "")
        << ',' << k.order.order << ',' << (k.order.self_referential ? 1 : 0) << ','
        << io::format_double(k.beta) << ',' << k.k << ',' << k.population_size << ','
        << window.first << ',' << window.last << ',';
    try {
      const auto fit = fit_growth_order(curve.mean_best, window);
      entry["fit"] = fit_json(fit);
      csv << fit.points << ',' << io::format_double(fit.slope) << ','
          << io::format_double(fit.r2_loglin) << ','
          << io::format_double(fit.r2_loglog) << ",\n";
      log << "order " << k.order.label() << " top-" << k.k
          << ": slope " << fit.slope << ", log-linear R^2 " << fit.r2_loglin << '\n';
    } catch (const InsufficientDataError& e) {
      entry["fit_error"] = e.what();
      csv << "0,,,," << e.what() << '\n';
    }
    fits.push_back(entry);
  }
  report["fits"] = fits;

  std::filesystem::create_directories(cfg.output_dir);
  const auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(std::filesystem::path(cfg.output_dir) / name, std::ios::trunc);
    out << body;
    if (!out) throw IoError("cannot write " + name);
  };
  write("fit.csv", csv.str());
  write("report.json", report.dump(2) + "\n");
}

}  // namespace

std::string execute(const CliConfig& cfg, std::ostream& log) {
  json report;
  report["config"] = json::parse(cfg.effective_json);
  report["engine_version"] = engine_version();
  io::ResultSet results;

  switch (cfg.subcommand) {
    case Subcommand::Simulate: {
      const auto configs = simulate_configs(cfg);
      log << "simulate: " << configs.size() << " runs\n";
      results.runs = run_all(configs, cfg.threads);
      json curves = json::array();
      for (const auto& c : aggregate_runs(results.runs)) {
        json s = curve_summary(c);
        if (c.key.kind == TaskKind::NumericFitness) {
          try {
            s["growth_fit"] = fit_json(fit_growth_order(c.mean_best,
                                                        default_growth_window(c.length())));
          } catch (const InsufficientDataError& e) {
            s["growth_fit_error"] = e.what();
          }
        }
        curves.push_back(s);
      }
      report["curves"] = curves;
      if (cfg.experiment.task.kind == TaskKind::TimeSeries) {
        const auto cells = tabulate_forecasting(results.runs);
        report["forecasting"] = cells_json(cells);
        report["best_order_by_target"] = best_orders_json(cells);
      }
      break;
    }
    case Subcommand::Figure1: {
      log << "figure1: " << cfg.experiment.orders.size() << " orders x "
          << cfg.experiment.seeds << " seeds\n";
      auto res = run_figure1(cfg.experiment, {}, cfg.threads);
      json curves = json::array();
      for (const auto& c : res.curves) {
        json s = curve_summary(c.curve);
        if (c.fit) {
          s["growth_fit"] = fit_json(*c.fit);
          log << "top-" << c.curve.key.k << " order " << c.curve.key.order.label()
              << ": slope " << c.fit->slope << ", log-linear R^2 " << c.fit->r2_loglin
              << '\n';
        } else {
          s["growth_fit_error"] = c.fit_error;
        }
        curves.push_back(s);
      }
      report["curves"] = curves;

      // Top-1: standard orders against order 0 at the final generation.
      const AggregateCurve* base = nullptr;
      for (const auto& c : res.curves) {
        if (c.curve.key.k == 1 && c.curve.key.order == OrderSpec{0, false}) base = &c.curve;
      }
      if (base != nullptr) {
        json cmp = json::array();
        for (const auto& c : res.curves) {
          if (c.curve.key.k != 1 || c.curve.key.order.self_referential ||
              &c.curve == base) {
            continue;
          }
          const auto f = compare_final(c.curve, *base);
          cmp.push_back({{"order", c.curve.key.order.label()},
                         {"difference_vs_order0", f.difference},
                         {"combined_sem", f.combined_sem},
                         {"within_2_sem", f.within(2.0)}});
        }
        report["top1_final_comparison"] = cmp;
      }
      results.runs = std::move(res.runs);
      results.figure1 = std::move(res.curves);
      break;
    }
    case Subcommand::Table1: {
      log << "table1: " << cfg.targets.size() << " targets x "
          << cfg.experiment.orders.size() << " orders x "
          << cfg.experiment.beta_grid.size() << " betas x " << cfg.experiment.seeds
          << " seeds\n";
      auto res = run_table1(cfg.experiment, cfg.targets, cfg.threads);
      report["cells"] = cells_json(res.cells);
      report["best_order_by_target"] = best_orders_json(res.cells);
      for (const auto& c : res.cells) {
        log << target_name(c.target) << " order " << c.order.label() << ": "
            << c.best_error << " (beta " << c.best_beta << ")\n";
      }
      results.runs = std::move(res.runs);
      results.table1 = std::move(res.cells);
      break;
    }
    case Subcommand::TheoremCheck: {
      const auto entries = run_theorem_checks(cfg.theorem, cfg.seed, cfg.threads);
      std::uint64_t violations = 0;
      bool t1 = true, t2 = true;
      json arr = json::array();
      for (const auto& e : entries) {
        violations += e.report.pathwise_violations;
        if (e.top1_applies) t1 = t1 && e.top1_holds;
        if (e.strict_applies) t2 = t2 && e.strict_holds;
        const auto& r = e.report;
        arr.push_back({{"meta_order", e.meta_order},
                       {"k", e.selection.k},
                       {"population_size", e.selection.population_size},
                       {"trials", r.trials},
                       {"base_seed", e.base_seed},
                       {"mean_diff", r.mean_diff},
                       {"sem_diff", r.sem_diff},
                       {"mean_children_base", r.mean_children_base},
                       {"mean_children_perturbed", r.mean_children_perturbed},
                       {"pathwise_violations", r.pathwise_violations},
                       {"witness_count", r.witness_count},
                       {"witness_observed", r.witness_observed},
                       {"unequal_trials", r.unequal_trials},
                       {"pathwise_holds", e.pathwise_holds},
                       {"top1_applies", e.top1_applies},
                       {"top1_holds", e.top1_holds},
                       {"strict_applies", e.strict_applies},
                       {"strict_holds", e.strict_holds}});
        log << "n=" << e.meta_order << " k=" << e.selection.k
            << " N=" << e.selection.population_size << ": diff " << r.mean_diff
            << " +/- " << r.sem_diff << ", violations " << r.pathwise_violations
            << '\n';
      }
      report["checks"] = arr;
      report["lemma2_pathwise_violations"] = violations;
      report["verdicts"] = {{"pathwise_dominance", violations == 0},
                            {"top1_equal_counts", t1},
                            {"strict_advantage", t2}};
      results.theorem_checks = entries;
      break;
    }
    case Subcommand::Fit:
      run_fit(cfg, report, log);
      return report.dump(2) + "\n";
  }

  const std::string text = report.dump(2) + "\n";
  const auto written = io::emit_results(results, text, cfg.output_dir);
  for (const auto& p : written) log << "wrote " << p.string() << '\n';
  return text;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ContractViolation& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  try {
    execute(cfg, out);
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace ordevo::cli
