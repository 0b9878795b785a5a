// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordevo/experiments.hpp"
#include "ordevo/oracle.hpp"

namespace ordevo::io {

/// Shortest decimal string that parses back to the same double; "inf",
/// "-inf" and "nan" for non-finite values.
std::string format_double(double value);
double parse_double(std::string_view text);

inline constexpr std::string_view kRunsHeader =
    "task,target,order,self_ref,beta,k,pop,seed,generation,best_fitness,pred_error";
inline constexpr std::string_view kAggregateHeader =
    "task,target,order,self_ref,beta,k,pop,generation,seeds,mean_best_fitness,"
    "sem_best_fitness,mean_pred_error,sem_pred_error";

/// One row per (run, generation). Rows follow the record order.
void write_runs_csv(std::ostream& out, std::span<const RunRecord> records);

/// Rebuilds records from runs.csv. Fields absent from the CSV (time scale,
/// beta interpretation, truncation marker) keep their defaults; the series
/// themselves round-trip exactly.
std::vector<RunRecord> read_runs_csv(std::istream& in);

void write_aggregate_csv(std::ostream& out, std::span<const AggregateCurve> curves);

void write_table1_csv(std::ostream& out, std::span<const Table1Cell> cells);
void write_theorem_csv(std::ostream& out,
                       std::span<const TheoremCheckEntry> entries);

/// Mean curve with a +/-SEM band per order, one panel per selection size.
/// The y axis is sign(v)*log10(1+|v|) so polynomial and exponential curves
/// share a panel.
std::string render_growth_svg(std::span<const Figure1Curve> curves,
                              std::string_view title);

struct ResultSet {
  std::vector<RunRecord> runs;
  std::vector<Figure1Curve> figure1;
  std::vector<Table1Cell> table1;
  std::vector<TheoremCheckEntry> theorem_checks;
};

/// Writes runs.csv and aggregate.csv (when there are runs), figure1.svg,
/// table1.csv, theorem_check.csv (when those parts are present) and
/// report.json. Every file is rendered in memory first, so an empty result
/// set or a failed render leaves no partial output. Throws IoError if the
/// directory or a file cannot be written. Returns the files written.
std::vector<std::filesystem::path> emit_results(const ResultSet& results,
                                                std::string_view report_json,
                                                const std::filesystem::path& outdir);

}  // namespace ordevo::io
