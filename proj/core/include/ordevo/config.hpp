// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordevo/errors.hpp"
#include "ordevo/experiments.hpp"
#include "ordevo/oracle.hpp"

namespace ordevo::cli {

enum class Subcommand { Simulate, TheoremCheck, Figure1, Table1, Fit };

std::string_view subcommand_name(Subcommand sub) noexcept;

/// Thrown for --help; carries the rendered help text.
class HelpRequested : public Error {
 public:
  using Error::Error;
};

struct FitOptions {
  std::string input;
  std::optional<std::uint64_t> window_first;
  std::optional<std::uint64_t> window_last;
};

/// A fully materialized invocation. Every default is filled in.
struct CliConfig {
  Subcommand subcommand = Subcommand::Simulate;
  std::optional<std::string> config_path;
  std::string preset;
  ExperimentSpec experiment;
  /// Forecasting targets (simulate with the timeseries task, table1).
  std::vector<Target> targets;
  TheoremGrid theorem;
  FitOptions fit;
  std::string output_dir = "ordevo-out";
  unsigned threads = 0;
  std::uint64_t seed = 0;
  /// The effective configuration as a JSON object (pretty-printed).
  std::string effective_json;
};

/// Keys accepted by a subcommand, both as --flags and as config-file keys.
std::vector<std::string_view> allowed_keys(Subcommand sub);

/// Merges, lowest precedence first: built-in defaults, the preset named by
/// any layer, ORDEVO_THREADS (`env_threads`), the JSON config file, and the
/// flags. Unknown keys and malformed values raise ConfigError naming the
/// key; invariant violations raise ValidationError.
CliConfig resolve_config(Subcommand sub,
                         const std::map<std::string, std::string>& flags,
                         std::optional<std::string> config_file_text,
                         std::optional<std::string> env_threads = std::nullopt);

/// argv-style entry point (args exclude the program name). Reads the config
/// file named by --config and ORDEVO_THREADS from the environment.
CliConfig parse_config(std::span<const std::string> args);

}  // namespace ordevo::cli
