// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "ordevo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <nlohmann/json.hpp>

namespace ordevo::cli {

using nlohmann::json;

std::string_view subcommand_name(Subcommand sub) noexcept {
  switch (sub) {
    case Subcommand::Simulate: return "simulate";
    case Subcommand::TheoremCheck: return "theorem-check";
    case Subcommand::Figure1: return "figure1";
    case Subcommand::Table1: return "table1";
    case Subcommand::Fit: return "fit";
  }
  return "?";
}

std::vector<std::string_view> allowed_keys(Subcommand sub) {
  std::vector<std::string_view> keys{"seed", "threads", "out"};
  const auto add = [&](std::initializer_list<std::string_view> more) {
    keys.insert(keys.end(), more.begin(), more.end());
  };
  switch (sub) {
    case Subcommand::Simulate:
      add({"preset", "task", "targets", "orders", "pop", "k", "beta", "betas",
           "beta-interpretation", "gens", "seeds", "time-scale", "error-metric"});
      break;
    case Subcommand::Figure1:
      add({"preset", "orders", "pop", "k", "beta", "betas", "beta-interpretation",
           "gens", "seeds"});
      break;
    case Subcommand::Table1:
      add({"preset", "targets", "orders", "pop", "k", "beta", "betas",
           "beta-interpretation", "gens", "seeds", "time-scale", "error-metric"});
      break;
    case Subcommand::TheoremCheck:
      add({"orders", "ks", "pops", "trials", "delta", "focal-slot", "init", "beta",
           "beta-interpretation", "sems"});
      break;
    case Subcommand::Fit:
      keys = {"out", "input", "window-first", "window-last"};
      break;
  }
  return keys;
}

namespace {

bool uses_beta_grid(Subcommand sub) {
  return sub == Subcommand::Simulate || sub == Subcommand::Figure1 ||
         sub == Subcommand::Table1;
}

std::string orders_string(const std::vector<OrderSpec>& orders) {
  std::string out;
  for (const auto& o : orders) {
    if (!out.empty()) out += ',';
    out += o.label();
  }
  return out;
}

json defaults_for(Subcommand sub) {
  json d = {{"seed", 0}, {"threads", 0}, {"out", "ordevo-out"}};
  switch (sub) {
    case Subcommand::Simulate:
      d.update({{"task", "numeric"},
                {"targets", "t"},
                {"orders", "0,1,2,3"},
                {"pop", 2048},
                {"k", 2},
                {"betas", json::array({1.0})},
                {"beta-interpretation", "variance"},
                {"gens", 1000},
                {"seeds", 8},
                {"time-scale", 100.0},
                {"error-metric", "fittest"}});
      break;
    case Subcommand::Figure1:
    case Subcommand::Table1:
      d.update({{"beta-interpretation", "variance"}});
      if (sub == Subcommand::Table1) {
        d.update({{"targets", "t,t2,sin,tsint"},
                  {"time-scale", 100.0},
                  {"error-metric", "fittest"}});
      }
      break;
    case Subcommand::TheoremCheck:
      d.update({{"orders", "1,2,3"},
                {"ks", "1,2,4"},
                {"pops", "4,8"},
                {"trials", 10000},
                {"delta", 1.0},
                {"focal-slot", 0},
                {"init", "jitter"},
                {"beta", 1.0},
                {"beta-interpretation", "variance"},
                {"sems", 5.0}});
      break;
    case Subcommand::Fit:
      d = {{"out", "ordevo-out"}};
      break;
  }
  return d;
}

json preset_layer(Subcommand sub, const std::string& name) {
  const ExperimentSpec p = make_preset(name);
  const bool figure = name.starts_with("figure1");
  if (sub == Subcommand::Figure1 && !figure) {
    throw ConfigError("preset", "'" + name + "' is not a figure1 preset");
  }
  if (sub == Subcommand::Table1 && figure) {
    throw ConfigError("preset", "'" + name + "' is not a table1 preset");
  }
  json layer = {{"orders", orders_string(p.orders)},
                {"pop", p.selection.population_size},
                {"k", p.selection.k},
                {"betas", p.beta_grid},
                {"gens", p.generations},
                {"seeds", p.seeds}};
  if (sub == Subcommand::Simulate) {
    layer["task"] = std::string(task_kind_name(p.task.kind));
    if (!figure) layer["targets"] = "t,t2,sin,tsint";
  }
  return layer;
}

void apply_layer(json& merged, const json& layer, Subcommand sub,
                 std::string_view source) {
  if (!layer.is_object()) {
    throw ConfigError("", std::string(source) + " must be a JSON object");
  }
  const auto allowed = allowed_keys(sub);
  for (const auto& [key, value] : layer.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(key, "unknown key for " + std::string(subcommand_name(sub)) +
                                 " (from " + std::string(source) + ")");
    }
    if (key == "beta" && uses_beta_grid(sub)) {
      merged["betas"] = json::array({value});
    } else {
      merged[key] = value;
    }
  }
}

std::string as_string(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw ConfigError(key, "expected a string");
}

double as_double(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (!s.empty() && ec == std::errc{} && ptr == s.data() + s.size()) return out;
  }
  throw ConfigError(key, "expected a number, got " + v.dump());
}

std::uint64_t as_uint(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (!s.empty() && ec == std::errc{} && ptr == s.data() + s.size()) return out;
  }
  throw ConfigError(key, "expected a non-negative integer, got " + v.dump());
}

std::vector<json> as_list(const json& v, const std::string& key) {
  if (v.is_array()) return {v.begin(), v.end()};
  if (v.is_number()) return {v};
  if (v.is_string()) {
    std::vector<json> items;
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) items.emplace_back(item);
    }
    if (items.empty()) throw ConfigError(key, "empty list");
    return items;
  }
  throw ConfigError(key, "expected a list");
}

template <typename Fn>
auto map_list(const json& v, const std::string& key, Fn&& convert) {
  std::vector<decltype(convert(json{}))> out;
  for (const auto& item : as_list(v, key)) out.push_back(convert(item));
  return out;
}

bool parse_beta_interpretation(const json& v) {
  const auto s = as_string(v, "beta-interpretation");
  if (s == "variance") return true;
  if (s == "std") return false;
  throw ConfigError("beta-interpretation", "expected 'variance' or 'std', got '" + s + "'");
}

// Keys are present in `m` for every field the subcommand uses; the
// defaults layer guarantees it except for optional ones.
const json& need(const json& m, const std::string& key) {
  if (!m.contains(key)) throw ConfigError(key, "missing required value");
  return m.at(key);
}

void build_experiment(const json& m, Subcommand sub, CliConfig& cfg) {
  ExperimentSpec& e = cfg.experiment;
  e.task = FitnessTask::numeric();
  if (sub == Subcommand::Simulate) e.task.kind = parse_task_kind(as_string(need(m, "task"), "task"));
  if (sub == Subcommand::Table1) e.task.kind = TaskKind::TimeSeries;
  if (m.contains("time-scale")) e.task.time_scale = as_double(m.at("time-scale"), "time-scale");
  if (e.task.kind == TaskKind::TimeSeries) {
    cfg.targets = map_list(need(m, "targets"), "targets", [](const json& j) {
      return parse_target(as_string(j, "targets"));
    });
    e.task.target = cfg.targets.front();
  }
  e.orders = map_list(need(m, "orders"), "orders", [](const json& j) {
    return OrderSpec::parse(as_string(j, "orders"));
  });
  e.selection.population_size = as_uint(need(m, "pop"), "pop");
  e.selection.k = as_uint(need(m, "k"), "k");
  e.beta_grid = map_list(need(m, "betas"), "betas",
                         [](const json& j) { return as_double(j, "betas"); });
  e.mutation.beta = e.beta_grid.front();
  e.mutation.beta_is_variance = parse_beta_interpretation(need(m, "beta-interpretation"));
  e.generations = as_uint(need(m, "gens"), "gens");
  const auto seeds = as_uint(need(m, "seeds"), "seeds");
  if (seeds > 0xFFFFFFFFULL) throw ConfigError("seeds", "too many seeds");
  e.seeds = static_cast<std::uint32_t>(seeds);
  e.base_seed = cfg.seed;
  if (m.contains("error-metric")) {
    e.error_metric = parse_error_metric(as_string(m.at("error-metric"), "error-metric"));
  }
  e.validate();
}

void build_theorem(const json& m, CliConfig& cfg) {
  TheoremGrid& g = cfg.theorem;
  const auto to_size = [](const char* key) {
    return [key](const json& j) { return static_cast<std::size_t>(as_uint(j, key)); };
  };
  g.meta_orders = map_list(need(m, "orders"), "orders", to_size("orders"));
  g.ks = map_list(need(m, "ks"), "ks", to_size("ks"));
  g.population_sizes = map_list(need(m, "pops"), "pops", to_size("pops"));
  g.trials = as_uint(need(m, "trials"), "trials");
  g.delta = as_double(need(m, "delta"), "delta");
  g.focal_slot = as_uint(need(m, "focal-slot"), "focal-slot");
  const auto init = as_string(need(m, "init"), "init");
  if (init == "jitter") {
    g.init = InitMode::Jitter;
  } else if (init == "zero") {
    g.init = InitMode::Zero;
  } else {
    throw ConfigError("init", "expected 'jitter' or 'zero', got '" + init + "'");
  }
  g.mutation.beta = as_double(need(m, "beta"), "beta");
  g.mutation.beta_is_variance = parse_beta_interpretation(need(m, "beta-interpretation"));
  g.significance_sems = as_double(need(m, "sems"), "sems");

  if (g.trials < 1) throw ValidationError("trials must be at least 1");
  g.mutation.validate();
  if (!(g.delta > 0.0)) throw ValidationError("delta must be a finite positive number");
  std::size_t valid = 0;
  for (std::size_t k : g.ks) {
    for (std::size_t pop : g.population_sizes) {
      if (k >= 1 && k <= pop && pop % k == 0) {
        ++valid;
        if (g.focal_slot >= pop) {
          throw ValidationError("focal-slot must be below every population size");
        }
      }
    }
  }
  if (valid == 0) {
    throw ValidationError("no (k, pop) pair satisfies 1 <= k <= pop with pop divisible by k");
  }
}

json echo(const CliConfig& cfg) {
  json e = {{"subcommand", subcommand_name(cfg.subcommand)},
            {"seed", cfg.seed},
            {"threads", cfg.threads},
            {"out", cfg.output_dir},
            {"engine_version", ORDEVO_VERSION_STRING}};
  if (cfg.config_path) e["config_file"] = *cfg.config_path;
  if (!cfg.preset.empty()) e["preset"] = cfg.preset;
  switch (cfg.subcommand) {
    case Subcommand::Simulate:
    case Subcommand::Figure1:
    case Subcommand::Table1: {
      const auto& x = cfg.experiment;
      std::vector<std::string> orders;
      for (const auto& o : x.orders) orders.push_back(o.label());
      e["task"] = task_kind_name(x.task.kind);
      if (x.task.kind == TaskKind::TimeSeries) {
        std::vector<std::string> t;
        for (auto target : cfg.targets) t.emplace_back(target_name(target));
        e["targets"] = t;
        e["time_scale"] = x.task.time_scale;
        e["error_metric"] = error_metric_name(x.error_metric);
      }
      e["orders"] = orders;
      e["population_size"] = x.selection.population_size;
      e["k"] = x.selection.k;
      e["beta_grid"] = x.beta_grid;
      e["beta_is_variance"] = x.mutation.beta_is_variance;
      e["generations"] = x.generations;
      e["seeds"] = x.seeds;
      e["base_seed"] = x.base_seed;
      e["seed_scheme"] = "run seed j = base_seed + j for j in [0, seeds)";
      break;
    }
    case Subcommand::TheoremCheck: {
      const auto& g = cfg.theorem;
      e["meta_orders"] = g.meta_orders;
      e["ks"] = g.ks;
      e["population_sizes"] = g.population_sizes;
      e["trials"] = g.trials;
      e["delta"] = g.delta;
      e["focal_slot"] = g.focal_slot;
      e["init"] = g.init == InitMode::Jitter ? "jitter" : "zero";
      e["beta"] = g.mutation.beta;
      e["beta_is_variance"] = g.mutation.beta_is_variance;
      e["significance_sems"] = g.significance_sems;
      e["seed_scheme"] = "config c uses trial seeds seed + c*trials .. seed + (c+1)*trials - 1";
      break;
    }
    case Subcommand::Fit:
      e["input"] = cfg.fit.input;
      if (cfg.fit.window_first) e["window_first"] = *cfg.fit.window_first;
      if (cfg.fit.window_last) e["window_last"] = *cfg.fit.window_last;
      break;
  }
  return e;
}

}  // namespace

CliConfig resolve_config(Subcommand sub,
                         const std::map<std::string, std::string>& flags,
                         std::optional<std::string> config_file_text,
                         std::optional<std::string> env_threads) {
  json file_layer = json::object();
  if (config_file_text) {
    try {
      file_layer = json::parse(*config_file_text);
    } catch (const json::parse_error& e) {
      throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
  }
  json flag_layer = json::object();
  for (const auto& [key, value] : flags) flag_layer[key] = value;

  json merged = defaults_for(sub);

  std::string preset;
  if (flag_layer.contains("preset")) {
    preset = as_string(flag_layer["preset"], "preset");
  } else if (file_layer.is_object() && file_layer.contains("preset")) {
    preset = as_string(file_layer["preset"], "preset");
  } else if (sub == Subcommand::Figure1) {
    preset = "figure1-desk";
  } else if (sub == Subcommand::Table1) {
    preset = "table1-desk";
  }
  if (!preset.empty()) {
    const auto allowed = allowed_keys(sub);
    if (std::find(allowed.begin(), allowed.end(), "preset") == allowed.end()) {
      throw ConfigError("preset", "not accepted by " + std::string(subcommand_name(sub)));
    }
    merged.update(preset_layer(sub, preset));
  }
  if (env_threads && !env_threads->empty()) merged["threads"] = *env_threads;
  apply_layer(merged, file_layer, sub, "config file");
  apply_layer(merged, flag_layer, sub, "command line");
  merged.erase("preset");

  CliConfig cfg;
  cfg.subcommand = sub;
  cfg.preset = preset;
  cfg.seed = merged.contains("seed") ? as_uint(merged["seed"], "seed") : 0;
  const auto threads = merged.contains("threads") ? as_uint(merged["threads"], "threads") : 0;
  if (threads > 4096) throw ConfigError("threads", "unreasonably large thread count");
  cfg.threads = static_cast<unsigned>(threads);
  cfg.output_dir = as_string(need(merged, "out"), "out");

  switch (sub) {
    case Subcommand::Simulate:
    case Subcommand::Figure1:
    case Subcommand::Table1:
      build_experiment(merged, sub, cfg);
      break;
    case Subcommand::TheoremCheck:
      build_theorem(merged, cfg);
      break;
    case Subcommand::Fit:
      cfg.fit.input = as_string(need(merged, "input"), "input");
      if (merged.contains("window-first")) {
        cfg.fit.window_first = as_uint(merged["window-first"], "window-first");
      }
      if (merged.contains("window-last")) {
        cfg.fit.window_last = as_uint(merged["window-last"], "window-last");
      }
      if (cfg.fit.window_first && cfg.fit.window_last &&
          (*cfg.fit.window_first < 1 || *cfg.fit.window_last < *cfg.fit.window_first)) {
        throw ValidationError("fit window must satisfy 1 <= window-first <= window-last");
      }
      break;
  }
  cfg.effective_json = echo(cfg).dump(2);
  return cfg;
}

CliConfig parse_config(std::span<const std::string> args) {
  CLI::App app{"ordevo: population-based evolution with higher-order meta-parameters"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  struct SubState {
    Subcommand sub;
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::string config_path;
  };
  std::vector<SubState> subs;
  const std::pair<Subcommand, const char*> table[] = {
      {Subcommand::Simulate, "Run evolution for every (order, beta, seed) cell"},
      {Subcommand::TheoremCheck, "Coupled common-noise checks of the top-k selection results"},
      {Subcommand::Figure1, "Growth curves by meta-order, top-k versus top-1"},
      {Subcommand::Table1, "Forecasting error by target and meta-order with a beta sweep"},
      {Subcommand::Fit, "Fit growth orders to the curves in a runs.csv"}};
  subs.reserve(std::size(table));
  for (const auto& [sub, help] : table) {
    subs.push_back({sub, nullptr, {}, {}});
    auto& st = subs.back();
    st.app = app.add_subcommand(std::string(subcommand_name(sub)), help);
    st.app->add_option("--config", st.config_path, "JSON file with option values");
    for (auto key : allowed_keys(sub)) {
      const std::string name(key);
      st.app->add_option_function<std::string>(
          "--" + name, [&st, name](const std::string& v) { st.values[name] = v; },
          "see README for '" + name + "'");
    }
  }

  std::vector<const char*> argv{"ordevo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw ConfigError("", e.what());
  }

  for (const auto& st : subs) {
    if (!st.app->parsed()) continue;
    std::optional<std::string> text;
    if (!st.config_path.empty()) {
      std::ifstream in(st.config_path);
      if (!in) throw ConfigError("config", "cannot read " + st.config_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    std::optional<std::string> env;
    if (const char* t = std::getenv("ORDEVO_THREADS")) env = t;
    auto cfg = resolve_config(st.sub, st.values, text, env);
    if (!st.config_path.empty()) {
      cfg.config_path = st.config_path;
      cfg.effective_json = [&] {
        auto j = json::parse(cfg.effective_json);
        j["config_file"] = st.config_path;
        return j.dump(2);
      }();
    }
    return cfg;
  }
  throw ConfigError("", "a subcommand is required");
}

}  // namespace ordevo::cli
