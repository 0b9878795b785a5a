// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <unistd.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ordevo/errors.hpp"
#include "ordevo/results_io.hpp"

namespace ordevo {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("ordevo-io-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<RunRecord> forecast_runs() {
  ExperimentSpec spec;
  spec.task = FitnessTask::time_series(Target::SineOfTSineT);
  spec.orders = {{0, false}, {2, false}};
  spec.selection = {2, 8};
  spec.beta_grid = {0.5, 0.05};
  spec.generations = 40;
  spec.seeds = 3;
  spec.base_seed = 11;
  return run_all(spec.expand(), 1);
}

TEST(FormatDouble, RoundTripsExactly) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint64_t> bits;
  int checked = 0;
  while (checked < 20000) {
    const double v = std::bit_cast<double>(bits(rng));
    if (!std::isfinite(v)) continue;
    ++checked;
    EXPECT_EQ(io::parse_double(io::format_double(v)), v);
  }
  for (double v : {0.0, -0.0, 1.0, 0.1, 1e-300, 5e-324, 1.7976931348623157e308}) {
    EXPECT_EQ(io::parse_double(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(1.0), "1");
}

TEST(FormatDouble, NonFinite) {
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(io::format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(io::format_double(std::nan("")), "nan");
  EXPECT_TRUE(std::isinf(io::parse_double("inf")));
  EXPECT_TRUE(std::isnan(io::parse_double("nan")));
  EXPECT_THROW(io::parse_double("1.5x"), IoError);
  EXPECT_THROW(io::parse_double(""), IoError);
}

TEST(RunsCsv, HeaderAndRows) {
  const auto runs = forecast_runs();
  std::ostringstream out;
  io::write_runs_csv(out, runs);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, io::kRunsHeader);
  std::getline(in, line);
  EXPECT_EQ(line.rfind("timeseries,tsint,0,0,0.5,2,8,11,1,", 0), 0u) << line;
  std::size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, runs.size() * 40);
}

TEST(RunsCsv, ReaggregationReproducesAggregateCsv) {
  const auto runs = forecast_runs();
  std::ostringstream runs_csv, agg_csv;
  io::write_runs_csv(runs_csv, runs);
  io::write_aggregate_csv(agg_csv, aggregate_runs(runs));

  std::istringstream in(runs_csv.str());
  const auto back = io::read_runs_csv(in);
  ASSERT_EQ(back.size(), runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    EXPECT_EQ(back[i].best_fitness, runs[i].best_fitness);
    EXPECT_EQ(back[i].pred_error, runs[i].pred_error);
    EXPECT_EQ(back[i].config.seed, runs[i].config.seed);
  }
  std::ostringstream again;
  io::write_aggregate_csv(again, aggregate_runs(back));
  EXPECT_EQ(again.str(), agg_csv.str());
  EXPECT_EQ(agg_csv.str().substr(0, io::kAggregateHeader.size()), io::kAggregateHeader);
}

TEST(RunsCsv, RejectsMalformedInput) {
  std::istringstream bad_header("a,b,c\n");
  EXPECT_THROW(io::read_runs_csv(bad_header), IoError);
  std::istringstream short_row(std::string(io::kRunsHeader) + "\nnumeric,t,0\n");
  EXPECT_THROW(io::read_runs_csv(short_row), IoError);
}

TEST(GrowthSvg, OnePolylinePerOrderAndPanel) {
  ExperimentSpec spec;
  spec.task = FitnessTask::numeric();
  spec.orders = {{0, false}, {1, false}, {2, false}, {3, false}, {1, true}};
  spec.selection = {2, 16};
  spec.generations = 40;
  spec.seeds = 2;
  const auto fig = run_figure1(spec, {}, 1);
  const std::string svg = io::render_growth_svg(fig.curves, "growth <test>");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("growth &lt;test&gt;"), std::string::npos);
  std::size_t polylines = 0, bands = 0, panels = 0;
  for (std::size_t p = 0; (p = svg.find("<polyline class=\"mean\"", p)) != std::string::npos; ++p) ++polylines;
  for (std::size_t p = 0; (p = svg.find("class=\"sem-band\"", p)) != std::string::npos; ++p) ++bands;
  for (std::size_t p = 0; (p = svg.find("<g class=\"panel\"", p)) != std::string::npos; ++p) ++panels;
  EXPECT_EQ(polylines, 10u);
  EXPECT_EQ(bands, 10u);
  EXPECT_EQ(panels, 2u);
  for (const char* label : {"\"0\"", "\"1\"", "\"2\"", "\"3\"", "\"sr1\""}) {
    EXPECT_NE(svg.find(std::string("data-order=") + label), std::string::npos) << label;
  }
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(EmitResults, WritesExpectedFiles) {
  TempDir dir;
  io::ResultSet results;
  results.runs = forecast_runs();
  results.table1 = tabulate_forecasting(results.runs);
  const auto written = io::emit_results(results, "{\"ok\": true}\n", dir.path());
  EXPECT_EQ(written.size(), 4u);
  EXPECT_TRUE(fs::exists(dir.path() / "runs.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "aggregate.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "table1.csv"));
  EXPECT_FALSE(fs::exists(dir.path() / "figure1.svg"));
  EXPECT_EQ(slurp(dir.path() / "report.json"), "{\"ok\": true}\n");

  std::ostringstream expected;
  io::write_runs_csv(expected, results.runs);
  EXPECT_EQ(slurp(dir.path() / "runs.csv"), expected.str());
}

TEST(EmitResults, EmptySetLeavesNothingBehind) {
  TempDir dir;
  EXPECT_THROW(io::emit_results({}, "{}", dir.path()), IoError);
  EXPECT_FALSE(fs::exists(dir.path()));
}

TEST(EmitResults, UnwritablePath) {
  TempDir dir;
  fs::create_directories(dir.path());
  std::ofstream(dir.path() / "blocker") << "x";
  io::ResultSet results;
  results.runs = forecast_runs();
  EXPECT_THROW(io::emit_results(results, "{}", dir.path() / "blocker" / "out"), IoError);
}

TEST(TheoremCsv, OneRowPerEntry) {
  TheoremGrid grid;
  grid.meta_orders = {1};
  grid.trials = 50;
  const auto entries = run_theorem_checks(grid, 0, 1);
  std::ostringstream out;
  io::write_theorem_csv(out, entries);
  std::size_t lines = 0;
  for (char c : out.str()) lines += c == '\n';
  EXPECT_EQ(lines, entries.size() + 1);
}

}  // namespace
}  // namespace ordevo
