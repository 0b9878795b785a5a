// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "ordevo/config.hpp"

namespace ordevo::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,
  kExitRuntime = 3,
};

/// Version string recorded in every report.json.
std::string engine_version();

/// Runs a resolved invocation and writes its output files. Returns the
/// report.json text.
std::string execute(const CliConfig& cfg, std::ostream& log);

/// Full front end: parse, execute, map errors to exit codes.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ordevo::cli
